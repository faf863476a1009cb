#include "tpx/kernels.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <unordered_map>

#include <fftw3.h>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "tpx/tuple_space.hpp"

namespace tpx::kernels {

namespace {

std::int64_t chunk_count(std::int64_t n) { return (n + kReduceChunk - 1) / kReduceChunk; }

// Pairwise tree combine; order independent of thread count.
cplx pairwise_combine(std::vector<cplx>& parts) {
    std::int64_t m = std::int64_t(parts.size());
    if (m == 0) return {0.0, 0.0};
    while (m > 1) {
        std::int64_t half = m / 2;
        for (std::int64_t i = 0; i < half; ++i) parts[size_t(i)] = parts[size_t(2 * i)] + parts[size_t(2 * i + 1)];
        if (m % 2) parts[size_t(half)] = parts[size_t(m - 1)];
        m = half + (m % 2);
    }
    return parts[0];
}

// Cached FFTW plans for contiguous in-place 1-D transforms, one per (N, sign).
class PlanCache {
public:
    fftw_plan get(std::int64_t n, int sign) {
        std::scoped_lock lock(mutex_);
        auto key = n * 4 + (sign > 0 ? 1 : 0);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<cplx> dummy(static_cast<size_t>(n));
        fftw_plan plan = fftw_plan_dft_1d(int(n), reinterpret_cast<fftw_complex*>(dummy.data()),
                                          reinterpret_cast<fftw_complex*>(dummy.data()),
                                          sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::unordered_map<std::int64_t, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

struct FactorLayout {
    std::int64_t n;      // transform length
    std::int64_t stride; // distance between consecutive factor values
    std::int64_t batch;  // number of independent transforms
};

FactorLayout factor_layout(const TupleSpace& space, int factor) {
    std::int64_t n = space.local_dim();
    std::int64_t stride = 1;
    for (int f = space.copies() - 1; f > factor; --f) stride *= n;
    return {n, stride, space.dim() / n};
}

// base index of batch element b: slices run over (outer, inner) pairs.
inline std::int64_t batch_base(const FactorLayout& lay, std::int64_t b) {
    std::int64_t outer = b / lay.stride;
    std::int64_t inner = b % lay.stride;
    return outer * lay.n * lay.stride + inner;
}

void direct_dft(std::span<const cplx> twiddle, std::span<cplx> buf, std::span<cplx> out) {
    std::int64_t n = std::int64_t(buf.size());
    for (std::int64_t m = 0; m < n; ++m) {
        cplx acc(0.0, 0.0);
        for (std::int64_t j = 0; j < n; ++j) acc += twiddle[size_t((m * j) % n)] * buf[size_t(j)];
        out[size_t(m)] = acc;
    }
}

std::vector<cplx> make_twiddle(std::int64_t n, int sign) {
    std::vector<cplx> tw(static_cast<size_t>(n));
    for (std::int64_t r = 0; r < n; ++r) {
        double ang = 2.0 * std::numbers::pi * double(sign) * double(r) / double(n);
        tw[size_t(r)] = {std::cos(ang), std::sin(ang)};
    }
    return tw;
}

} // namespace

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
    std::int64_t n = std::int64_t(a.size());
    std::vector<cplx> parts(size_t(chunk_count(n)), cplx(0.0, 0.0));
#pragma omp parallel for schedule(static) if (n > 4 * kReduceChunk)
    for (std::int64_t c = 0; c < std::int64_t(parts.size()); ++c) {
        std::int64_t lo = c * kReduceChunk, hi = std::min(n, lo + kReduceChunk);
        cplx acc(0.0, 0.0);
        for (std::int64_t i = lo; i < hi; ++i) acc += std::conj(a[size_t(i)]) * b[size_t(i)];
        parts[size_t(c)] = acc;
    }
    return pairwise_combine(parts);
}

cplx sum(std::span<const cplx> a) {
    std::int64_t n = std::int64_t(a.size());
    std::vector<cplx> parts(size_t(chunk_count(n)), cplx(0.0, 0.0));
#pragma omp parallel for schedule(static) if (n > 4 * kReduceChunk)
    for (std::int64_t c = 0; c < std::int64_t(parts.size()); ++c) {
        std::int64_t lo = c * kReduceChunk, hi = std::min(n, lo + kReduceChunk);
        cplx acc(0.0, 0.0);
        for (std::int64_t i = lo; i < hi; ++i) acc += a[size_t(i)];
        parts[size_t(c)] = acc;
    }
    return pairwise_combine(parts);
}

double norm2(std::span<const cplx> a) {
    std::int64_t n = std::int64_t(a.size());
    std::vector<cplx> parts(size_t(chunk_count(n)), cplx(0.0, 0.0));
#pragma omp parallel for schedule(static) if (n > 4 * kReduceChunk)
    for (std::int64_t c = 0; c < std::int64_t(parts.size()); ++c) {
        std::int64_t lo = c * kReduceChunk, hi = std::min(n, lo + kReduceChunk);
        double acc = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) acc += std::norm(a[size_t(i)]);
        parts[size_t(c)] = {acc, 0.0};
    }
    return std::sqrt(pairwise_combine(parts).real());
}

void scale(std::span<cplx> a, cplx factor) {
    std::int64_t n = std::int64_t(a.size());
#pragma omp parallel for schedule(static) if (n > 4 * kReduceChunk)
    for (std::int64_t i = 0; i < n; ++i) a[size_t(i)] *= factor;
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
    std::int64_t n = std::int64_t(x.size());
#pragma omp parallel for schedule(static) if (n > 4 * kReduceChunk)
    for (std::int64_t i = 0; i < n; ++i) y[size_t(i)] += alpha * x[size_t(i)];
}

void gather_tuple_perm(const TupleSpace& space, std::span<const int> value_map,
                       std::span<const cplx> in, std::span<cplx> out) {
    std::int64_t dim = space.dim();
    std::int64_t n = space.local_dim();
    int copies = space.copies();
#pragma omp parallel for schedule(static) if (dim > 4 * kReduceChunk)
    for (std::int64_t t = 0; t < dim; ++t) {
        std::int64_t rest = t, src = 0, scale_f = 1;
        for (int f = copies - 1; f >= 0; --f) {
            src += std::int64_t(value_map[size_t(rest % n)]) * scale_f;
            rest /= n;
            scale_f *= n;
        }
        out[size_t(t)] = in[size_t(src)];
    }
}

void gather_tuple_perm_multi(const TupleSpace& space,
                             const std::vector<std::vector<int>>& value_maps,
                             std::span<const double> weights, std::span<const cplx> in,
                             std::span<cplx> out) {
    std::int64_t dim = space.dim();
    std::int64_t n = space.local_dim();
    int copies = space.copies();
    constexpr int kBatch = 16;
    // batches of up to 16 maps fused per pass; later passes accumulate
    for (size_t base = 0; base < value_maps.size(); base += kBatch) {
        int g_count = int(std::min(value_maps.size() - base, size_t(kBatch)));
        const int* maps[kBatch];
        const double* w = weights.data() + base;
        for (int g = 0; g < g_count; ++g) maps[g] = value_maps[base + size_t(g)].data();
        bool first = base == 0;
#pragma omp parallel for schedule(static) if (dim > 4 * kReduceChunk)
        for (std::int64_t t = 0; t < dim; ++t) {
            std::int64_t src[kBatch] = {};
            std::int64_t rest = t, place = 1;
            for (int f = copies - 1; f >= 0; --f) {
                std::int64_t digit = rest % n;
                rest /= n;
                for (int g = 0; g < g_count; ++g) src[g] += std::int64_t(maps[g][digit]) * place;
                place *= n;
            }
            cplx acc = first ? cplx(0.0, 0.0) : out[size_t(t)];
            for (int g = 0; g < g_count; ++g) acc += w[g] * in[size_t(src[g])];
            out[size_t(t)] = acc;
        }
    }
}

void dft_factor(const TupleSpace& space, int factor, int sign, std::span<cplx> data) {
    FactorLayout lay = factor_layout(space, factor);
    fftw_plan plan = plan_cache().get(lay.n, sign);
#pragma omp parallel if (lay.batch > 1)
    {
        std::vector<cplx> buf(size_t(lay.n));
#pragma omp for schedule(static)
        for (std::int64_t b = 0; b < lay.batch; ++b) {
            std::int64_t base = batch_base(lay, b);
            for (std::int64_t j = 0; j < lay.n; ++j) buf[size_t(j)] = data[size_t(base + j * lay.stride)];
            fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(buf.data()),
                             reinterpret_cast<fftw_complex*>(buf.data()));
            for (std::int64_t j = 0; j < lay.n; ++j) data[size_t(base + j * lay.stride)] = buf[size_t(j)];
        }
    }
}

void dense_factor_apply(const TupleSpace& space, int factor, const cplx* matrix,
                        std::span<cplx> data) {
    FactorLayout lay = factor_layout(space, factor);
#pragma omp parallel if (lay.batch > 1)
    {
        std::vector<cplx> buf(size_t(lay.n)), res(size_t(lay.n));
#pragma omp for schedule(static)
        for (std::int64_t b = 0; b < lay.batch; ++b) {
            std::int64_t base = batch_base(lay, b);
            for (std::int64_t j = 0; j < lay.n; ++j) buf[size_t(j)] = data[size_t(base + j * lay.stride)];
            for (std::int64_t r = 0; r < lay.n; ++r) {
                cplx acc(0.0, 0.0);
                const cplx* row = matrix + r * lay.n;
                for (std::int64_t j = 0; j < lay.n; ++j) acc += row[j] * buf[size_t(j)];
                res[size_t(r)] = acc;
            }
            for (std::int64_t j = 0; j < lay.n; ++j) data[size_t(base + j * lay.stride)] = res[size_t(j)];
        }
    }
}

std::vector<cplx> class_sums(std::span<const cplx> in, std::span<const std::int32_t> class_of,
                             std::int64_t num_classes) {
    std::int64_t n = std::int64_t(in.size());
    std::int64_t chunks = chunk_count(n);
    std::vector<cplx> partial(size_t(chunks * num_classes), cplx(0.0, 0.0));
#pragma omp parallel for schedule(static) if (n > 4 * kReduceChunk)
    for (std::int64_t c = 0; c < chunks; ++c) {
        std::int64_t lo = c * kReduceChunk, hi = std::min(n, lo + kReduceChunk);
        cplx* bins = partial.data() + c * num_classes;
        for (std::int64_t i = lo; i < hi; ++i) bins[class_of[size_t(i)]] += in[size_t(i)];
    }
    std::vector<cplx> out(size_t(num_classes), cplx(0.0, 0.0));
    std::vector<cplx> column(static_cast<size_t>(chunks));
    for (std::int64_t cls = 0; cls < num_classes; ++cls) {
        for (std::int64_t c = 0; c < chunks; ++c) column[size_t(c)] = partial[size_t(c * num_classes + cls)];
        out[size_t(cls)] = pairwise_combine(column);
        column.resize(size_t(chunks));
    }
    return out;
}

namespace serial {

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
    cplx acc(0.0, 0.0);
    for (size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

cplx sum(std::span<const cplx> a) {
    cplx acc(0.0, 0.0);
    for (const cplx& v : a) acc += v;
    return acc;
}

double norm2(std::span<const cplx> a) {
    double acc = 0.0;
    for (const cplx& v : a) acc += std::norm(v);
    return std::sqrt(acc);
}

void scale(std::span<cplx> a, cplx factor) {
    for (cplx& v : a) v *= factor;
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
    for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void gather_tuple_perm(const TupleSpace& space, std::span<const int> value_map,
                       std::span<const cplx> in, std::span<cplx> out) {
    std::int64_t n = space.local_dim();
    int copies = space.copies();
    for (std::int64_t t = 0; t < space.dim(); ++t) {
        std::int64_t rest = t, src = 0, scale_f = 1;
        for (int f = copies - 1; f >= 0; --f) {
            src += std::int64_t(value_map[size_t(rest % n)]) * scale_f;
            rest /= n;
            scale_f *= n;
        }
        out[size_t(t)] = in[size_t(src)];
    }
}

void gather_tuple_perm_multi(const TupleSpace& space,
                             const std::vector<std::vector<int>>& value_maps,
                             std::span<const double> weights, std::span<const cplx> in,
                             std::span<cplx> out) {
    std::int64_t n = space.local_dim();
    int copies = space.copies();
    for (std::int64_t t = 0; t < space.dim(); ++t) {
        cplx acc(0.0, 0.0);
        for (size_t g = 0; g < value_maps.size(); ++g) {
            std::int64_t rest = t, src = 0, place = 1;
            for (int f = copies - 1; f >= 0; --f) {
                src += std::int64_t(value_maps[g][size_t(rest % n)]) * place;
                rest /= n;
                place *= n;
            }
            acc += weights[g] * in[size_t(src)];
        }
        out[size_t(t)] = acc;
    }
}

void dft_factor(const TupleSpace& space, int factor, int sign, std::span<cplx> data) {
    FactorLayout lay = factor_layout(space, factor);
    std::vector<cplx> twiddle = make_twiddle(lay.n, sign);
    std::vector<cplx> buf(size_t(lay.n)), res(size_t(lay.n));
    for (std::int64_t b = 0; b < lay.batch; ++b) {
        std::int64_t base = batch_base(lay, b);
        for (std::int64_t j = 0; j < lay.n; ++j) buf[size_t(j)] = data[size_t(base + j * lay.stride)];
        direct_dft(twiddle, buf, res);
        for (std::int64_t j = 0; j < lay.n; ++j) data[size_t(base + j * lay.stride)] = res[size_t(j)];
    }
}

void dense_factor_apply(const TupleSpace& space, int factor, const cplx* matrix,
                        std::span<cplx> data) {
    FactorLayout lay = factor_layout(space, factor);
    std::vector<cplx> buf(size_t(lay.n)), res(size_t(lay.n));
    for (std::int64_t b = 0; b < lay.batch; ++b) {
        std::int64_t base = batch_base(lay, b);
        for (std::int64_t j = 0; j < lay.n; ++j) buf[size_t(j)] = data[size_t(base + j * lay.stride)];
        for (std::int64_t r = 0; r < lay.n; ++r) {
            cplx acc(0.0, 0.0);
            const cplx* row = matrix + r * lay.n;
            for (std::int64_t j = 0; j < lay.n; ++j) acc += row[j] * buf[size_t(j)];
            res[size_t(r)] = acc;
        }
        for (std::int64_t j = 0; j < lay.n; ++j) data[size_t(base + j * lay.stride)] = res[size_t(j)];
    }
}

std::vector<cplx> class_sums(std::span<const cplx> in, std::span<const std::int32_t> class_of,
                             std::int64_t num_classes) {
    std::vector<cplx> out(size_t(num_classes), cplx(0.0, 0.0));
    for (size_t i = 0; i < in.size(); ++i) out[size_t(class_of[i])] += in[i];
    return out;
}

} // namespace serial

} // namespace tpx::kernels
