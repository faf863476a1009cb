#include "tpx/moment_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tpx/kernels.hpp"

namespace tpx {

namespace {

constexpr double kWeightTol = 1e-9;
constexpr double kUnitaryTol = 1e-10;

void check_image(std::span<const int> image, std::int64_t n) {
    if (std::int64_t(image.size()) != n)
        throw ArgumentError("permutation image has wrong length");
    std::vector<char> hit(size_t(n), 0);
    for (int v : image) {
        if (v < 0 || v >= n || hit[size_t(v)])
            throw ArgumentError("permutation image is not a bijection");
        hit[size_t(v)] = 1;
    }
}

std::vector<int> invert_image(std::span<const int> image) {
    std::vector<int> inv(image.size());
    for (size_t i = 0; i < image.size(); ++i) inv[size_t(image[i])] = int(i);
    return inv;
}

void check_weights(const std::vector<double>& weights) {
    if (weights.empty()) throw ArgumentError("ensemble has no entries");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw ArgumentError("ensemble weights must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kWeightTol)
        throw ArgumentError("ensemble weights must sum to 1");
}

void check_unitary(const std::vector<cplx>& u, std::int64_t n) {
    if (std::int64_t(u.size()) != n * n)
        throw ArgumentError("explicit generator has wrong shape");
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t j = 0; j < n; ++j) {
            cplx acc(0.0, 0.0);
            for (std::int64_t l = 0; l < n; ++l)
                acc += std::conj(u[size_t(l * n + i)]) * u[size_t(l * n + j)];
            cplx want = (i == j) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
            if (std::abs(acc - want) > kUnitaryTol)
                throw ArgumentError("explicit generator is not unitary");
        }
    }
}

} // namespace

void PermDistribution::validate() const {
    if (n < 2) throw ArgumentError("PermDistribution: N must be >= 2");
    std::vector<double> weights;
    for (const auto& e : entries) {
        check_image(e.image, n);
        weights.push_back(e.weight);
    }
    check_weights(weights);
}

void QuantumEnsemble::validate() const {
    if (n < 2) throw ArgumentError("QuantumEnsemble: N must be >= 2");
    if (k < 1) throw ArgumentError("QuantumEnsemble: k must be >= 1");
    std::vector<double> weights;
    for (const auto& e : entries) {
        if (const auto* p = std::get_if<PermGenerator>(&e.op)) check_image(p->image, n);
        if (const auto* x = std::get_if<ExplicitGenerator>(&e.op)) check_unitary(x->u, n);
        weights.push_back(e.weight);
    }
    check_weights(weights);
}

namespace {

std::vector<cplx> conjugated(const std::vector<cplx>& m) {
    std::vector<cplx> out(m.size());
    for (size_t i = 0; i < m.size(); ++i) out[i] = std::conj(m[i]);
    return out;
}

std::vector<cplx> transposed(const std::vector<cplx>& m, std::int64_t n) {
    std::vector<cplx> out(m.size());
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < n; ++j) out[size_t(j * n + i)] = m[size_t(i * n + j)];
    return out;
}

// Averaged tuple permutations B(pi)^{x copies}; shared by the classical
// moment and the permutation part of quantum ensembles.
class PermutationMoment : public MomentOperator {
public:
    PermutationMoment(const TupleSpace& space, std::vector<std::vector<int>> images,
                      std::vector<double> weights)
        : MomentOperator(space), weights_(std::move(weights)) {
        for (auto& img : images) {
            inverse_.push_back(invert_image(img));
            forward_.push_back(std::move(img));
        }
    }

    void apply(std::span<const cplx> in, std::span<cplx> out) const override {
        accumulate(in, out, inverse_);
    }

    void apply_adjoint(std::span<const cplx> in, std::span<cplx> out) const override {
        // B(pi)^dagger = B(pi^{-1}), whose gather map is pi itself.
        accumulate(in, out, forward_);
    }

private:
    void accumulate(std::span<const cplx> in, std::span<cplx> out,
                    const std::vector<std::vector<int>>& maps) const {
        kernels::gather_tuple_perm_multi(space(), maps, weights_, in, out);
    }

    std::vector<std::vector<int>> forward_, inverse_;
    std::vector<double> weights_;
};

class FourierLayer : public MomentOperator {
public:
    FourierLayer(const TupleSpace& space, int k) : MomentOperator(space), k_(k) {
        if (space.copies() != 2 * k)
            throw ArgumentError("fourier_layer: space must have 2k factors");
    }

    void apply(std::span<const cplx> in, std::span<cplx> out) const override { run(in, out, +1); }

    void apply_adjoint(std::span<const cplx> in, std::span<cplx> out) const override {
        run(in, out, -1);
    }

private:
    void run(std::span<const cplx> in, std::span<cplx> out, int sign) const {
        std::copy(in.begin(), in.end(), out.begin());
        for (int f = 0; f < 2 * k_; ++f)
            kernels::dft_factor(space(), f, f < k_ ? sign : -sign, out);
        double scale = std::pow(double(space().local_dim()), -double(k_));
        kernels::scale(out, cplx(scale, 0.0));
    }

    int k_;
};

class EnsembleMoment : public MomentOperator {
public:
    EnsembleMoment(const TupleSpace& space, const QuantumEnsemble& ens)
        : MomentOperator(space), k_(ens.k) {
        for (const auto& e : ens.entries) {
            weights_.push_back(e.weight);
            if (const auto* p = std::get_if<PermGenerator>(&e.op)) {
                gens_.push_back(Perm{p->image, invert_image(p->image)});
            } else if (std::get_if<FourierGenerator>(&e.op)) {
                gens_.push_back(Fourier{});
            } else {
                const auto& u = std::get<ExplicitGenerator>(e.op).u;
                gens_.push_back(Explicit{u, conjugated(u), transposed(u, space.local_dim()),
                                         conjugated(transposed(u, space.local_dim()))});
            }
        }
    }

    void apply(std::span<const cplx> in, std::span<cplx> out) const override {
        run(in, out, false);
    }

    void apply_adjoint(std::span<const cplx> in, std::span<cplx> out) const override {
        run(in, out, true);
    }

private:
    struct Perm {
        std::vector<int> forward, inverse;
    };
    struct Fourier {};
    struct Explicit {
        std::vector<cplx> u, u_conj, u_trans, u_adj;
    };
    using Gen = std::variant<Perm, Fourier, Explicit>;

    void run(std::span<const cplx> in, std::span<cplx> out, bool adjoint) const {
        // All permutation generators fuse into a single gather pass.
        std::vector<std::vector<int>> perm_maps;
        std::vector<double> perm_weights;
        for (size_t g = 0; g < gens_.size(); ++g)
            if (const auto* p = std::get_if<Perm>(&gens_[g])) {
                perm_maps.push_back(adjoint ? p->forward : p->inverse);
                perm_weights.push_back(weights_[g]);
            }
        if (perm_maps.empty())
            std::fill(out.begin(), out.end(), cplx(0.0, 0.0));
        else
            kernels::gather_tuple_perm_multi(space(), perm_maps, perm_weights, in, out);

        std::vector<cplx> tmp;
        for (size_t g = 0; g < gens_.size(); ++g) {
            if (std::get_if<Perm>(&gens_[g])) continue;
            tmp.assign(in.begin(), in.end());
            if (std::get_if<Fourier>(&gens_[g])) {
                int sign = adjoint ? -1 : +1;
                for (int f = 0; f < 2 * k_; ++f)
                    kernels::dft_factor(space(), f, f < k_ ? sign : -sign, tmp);
                double scale = std::pow(double(space().local_dim()), -double(k_));
                kernels::scale(tmp, cplx(scale, 0.0));
            } else {
                const auto& x = std::get<Explicit>(gens_[g]);
                // U^{k,k} = U on the first k factors, conj(U) on the rest;
                // the adjoint swaps U -> U^dagger and conj(U) -> U^T.
                const cplx* first = adjoint ? x.u_adj.data() : x.u.data();
                const cplx* second = adjoint ? x.u_trans.data() : x.u_conj.data();
                for (int f = 0; f < 2 * k_; ++f)
                    kernels::dense_factor_apply(space(), f, f < k_ ? first : second, tmp);
            }
            kernels::axpy(cplx(weights_[g], 0.0), tmp, out);
        }
    }

    int k_;
    std::vector<Gen> gens_;
    std::vector<double> weights_;
};

class PowerOperator : public MomentOperator {
public:
    PowerOperator(OpPtr op, int m) : MomentOperator(op->space()), op_(std::move(op)), m_(m) {
        if (m_ < 1) throw ArgumentError("power_operator: m must be >= 1");
    }

    void apply(std::span<const cplx> in, std::span<cplx> out) const override {
        run(in, out, false);
    }

    void apply_adjoint(std::span<const cplx> in, std::span<cplx> out) const override {
        run(in, out, true);
    }

private:
    void run(std::span<const cplx> in, std::span<cplx> out, bool adjoint) const {
        std::vector<cplx> cur(in.begin(), in.end());
        for (int i = 0; i < m_; ++i) {
            if (adjoint)
                op_->apply_adjoint(cur, out);
            else
                op_->apply(cur, out);
            if (i + 1 < m_) std::copy(out.begin(), out.end(), cur.begin());
        }
    }

    OpPtr op_;
    int m_;
};

class SandwichOperator : public MomentOperator {
public:
    SandwichOperator(OpPtr outer, OpPtr inner)
        : MomentOperator(outer->space()), outer_(std::move(outer)), inner_(std::move(inner)) {
        if (!(outer_->space() == inner_->space()))
            throw ArgumentError("sandwich_operator: space mismatch");
    }

    void apply(std::span<const cplx> in, std::span<cplx> out) const override {
        std::vector<cplx> a(static_cast<size_t>(dim())), b(static_cast<size_t>(dim()));
        outer_->apply(in, a);
        inner_->apply(a, b);
        outer_->apply(b, out);
    }

    void apply_adjoint(std::span<const cplx> in, std::span<cplx> out) const override {
        std::vector<cplx> a(static_cast<size_t>(dim())), b(static_cast<size_t>(dim()));
        outer_->apply_adjoint(in, a);
        inner_->apply_adjoint(a, b);
        outer_->apply_adjoint(b, out);
    }

private:
    OpPtr outer_, inner_;
};

class DifferenceOperator : public MomentOperator {
public:
    DifferenceOperator(OpPtr a, OpPtr b)
        : MomentOperator(a->space()), a_(std::move(a)), b_(std::move(b)) {
        if (!(a_->space() == b_->space()))
            throw ArgumentError("difference_operator: space mismatch");
    }

    void apply(std::span<const cplx> in, std::span<cplx> out) const override {
        std::vector<cplx> tmp(static_cast<size_t>(dim()));
        a_->apply(in, out);
        b_->apply(in, tmp);
        kernels::axpy(cplx(-1.0, 0.0), tmp, out);
    }

    void apply_adjoint(std::span<const cplx> in, std::span<cplx> out) const override {
        std::vector<cplx> tmp(static_cast<size_t>(dim()));
        a_->apply_adjoint(in, out);
        b_->apply_adjoint(in, tmp);
        kernels::axpy(cplx(-1.0, 0.0), tmp, out);
    }

private:
    OpPtr a_, b_;
};

} // namespace

OpPtr permutation_moment(const PermDistribution& nu, int copies) {
    nu.validate();
    if (copies < 1) throw ArgumentError("permutation_moment: copies must be >= 1");
    TupleSpace space(nu.n, copies);
    if (space.dim() > kMaxDenseVectorDim)
        throw SizeLimitError("permutation_moment: dimension exceeds dense vector guard");
    std::vector<std::vector<int>> images;
    std::vector<double> weights;
    for (const auto& e : nu.entries) {
        images.push_back(e.image);
        weights.push_back(e.weight);
    }
    return std::make_shared<PermutationMoment>(space, std::move(images), std::move(weights));
}

OpPtr fourier_layer(const TupleSpace& space, int k) {
    return std::make_shared<FourierLayer>(space, k);
}

SymmetricProjector::SymmetricProjector(const TupleSpace& space)
    : MomentOperator(space), patterns_(std::make_shared<PartitionIndex>(space.copies())) {
    if (space.dim() > kMaxDenseVectorDim)
        throw SizeLimitError("symmetric_projector: dimension exceeds dense vector guard");
    class_of_.resize(size_t(space.dim()));
    class_count_.assign(size_t(patterns_->size()), 0);
    std::vector<int> tuple(size_t(space.copies())), ids(size_t(space.copies()));
    for (std::int64_t t = 0; t < space.dim(); ++t) {
        space.decode(t, tuple);
        equality_pattern_ids(tuple, ids);
        std::int32_t cls = std::int32_t(patterns_->position_of_ids(ids));
        class_of_[size_t(t)] = cls;
        ++class_count_[size_t(cls)];
    }
    rank_ = std::count_if(class_count_.begin(), class_count_.end(),
                          [](std::int64_t c) { return c > 0; });
}

void SymmetricProjector::apply(std::span<const cplx> in, std::span<cplx> out) const {
    std::vector<cplx> sums = kernels::class_sums(in, class_of_, patterns_->size());
    for (size_t c = 0; c < sums.size(); ++c)
        if (class_count_[c] > 0) sums[c] /= double(class_count_[c]);
    std::int64_t n = std::int64_t(in.size());
#pragma omp parallel for schedule(static) if (n > 16384)
    for (std::int64_t t = 0; t < n; ++t) out[size_t(t)] = sums[size_t(class_of_[size_t(t)])];
}

void SymmetricProjector::apply_adjoint(std::span<const cplx> in, std::span<cplx> out) const {
    apply(in, out); // orthogonal projector
}

std::shared_ptr<const SymmetricProjector> symmetric_projector(const TupleSpace& space) {
    return std::make_shared<SymmetricProjector>(space);
}

HaarProjector::HaarProjector(const TupleSpace& space, int k) : MomentOperator(space), k_(k) {
    if (space.copies() != 2 * k)
        throw ArgumentError("haar_projector: space must have 2k factors");
    std::int64_t n = space.local_dim();
    auto perms = all_permutations(k);
    std::int64_t r = std::int64_t(perms.size());

    // Place-value weights: member of E_{P(pi)} with free tuple f sits at
    // index sum_i f_i * fw[i].
    std::vector<std::int64_t> place(size_t(2 * k));
    place[size_t(2 * k - 1)] = 1;
    for (int j = 2 * k - 2; j >= 0; --j) place[size_t(j)] = place[size_t(j + 1)] * n;
    for (const auto& pi : perms) {
        std::vector<int> inv = invert_image(pi);
        std::vector<std::int64_t> fw(size_t(k), 0);
        for (int j = 0; j < k; ++j) fw[size_t(j)] += place[size_t(j)];
        for (int j = 0; j < k; ++j) fw[size_t(inv[size_t(j)])] += place[size_t(k + j)];
        perm_weights_.push_back(std::move(fw));
    }

    Eigen::MatrixXd gram(r, r);
    std::vector<SetPartition> pair_partitions;
    for (const auto& pi : perms) pair_partitions.push_back(perm_partition(pi));
    for (std::int64_t a = 0; a < r; ++a)
        for (std::int64_t b = 0; b < r; ++b) {
            int joined = join(pair_partitions[size_t(a)], pair_partitions[size_t(b)]).block_count();
            gram(a, b) = std::pow(double(n), double(joined - k));
        }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    const auto& evals = es.eigenvalues();
    double emax = evals(r - 1);
    double cutoff = emax * 1e-12;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(r);
    rank_ = 0;
    double emin_kept = emax;
    for (std::int64_t i = 0; i < r; ++i) {
        if (evals(i) > cutoff) {
            inv(i) = 1.0 / evals(i);
            emin_kept = std::min(emin_kept, evals(i));
            ++rank_;
        }
    }
    gram_condition_ = emax / emin_kept;
    if (rank_ == r && gram_condition_ > 1e12)
        throw IllConditionedError("haar_projector: Gram condition number exceeds 1e12");
    gram_pinv_ = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
    state_norm_ = std::sqrt(std::pow(double(n), double(k)));
}

void HaarProjector::apply(std::span<const cplx> in, std::span<cplx> out) const {
    std::int64_t n = space().local_dim();
    std::int64_t r = std::int64_t(perm_weights_.size());

    // Walk the N^k members of E_{P(pi)} with an odometer over free values,
    // keeping the packed index updated incrementally.
    auto for_each_member = [&](const std::vector<std::int64_t>& fw, auto&& visit) {
        std::vector<std::int64_t> f(size_t(k_), 0);
        std::int64_t idx = 0;
        while (true) {
            visit(idx);
            int d = k_ - 1;
            for (; d >= 0; --d) {
                idx += fw[size_t(d)];
                if (++f[size_t(d)] < n) break;
                idx -= n * fw[size_t(d)];
                f[size_t(d)] = 0;
            }
            if (d < 0) break;
        }
    };

    // overlaps v_pi = <E_{P(pi)} | in>
    Eigen::VectorXcd v(r);
    for (std::int64_t p = 0; p < r; ++p) {
        cplx acc(0.0, 0.0);
        for_each_member(perm_weights_[size_t(p)], [&](std::int64_t idx) { acc += in[size_t(idx)]; });
        v(p) = acc / state_norm_;
    }

    Eigen::VectorXcd coeff = gram_pinv_ * v;

    std::fill(out.begin(), out.end(), cplx(0.0, 0.0));
    for (std::int64_t p = 0; p < r; ++p) {
        cplx add = coeff(p) / state_norm_;
        for_each_member(perm_weights_[size_t(p)],
                        [&](std::int64_t idx) { out[size_t(idx)] += add; });
    }
}

void HaarProjector::apply_adjoint(std::span<const cplx> in, std::span<cplx> out) const {
    apply(in, out); // orthogonal projector
}

std::shared_ptr<const HaarProjector> haar_projector(const TupleSpace& space, int k) {
    return std::make_shared<HaarProjector>(space, k);
}

OpPtr ensemble_moment(const QuantumEnsemble& ens) {
    ens.validate();
    TupleSpace space(ens.n, 2 * ens.k);
    if (space.dim() > kMaxDenseVectorDim)
        throw SizeLimitError("ensemble_moment: dimension exceeds dense vector guard");
    return std::make_shared<EnsembleMoment>(space, ens);
}

OpPtr power_operator(OpPtr op, int m) {
    return std::make_shared<PowerOperator>(std::move(op), m);
}

OpPtr sandwich_operator(OpPtr outer, OpPtr inner) {
    return std::make_shared<SandwichOperator>(std::move(outer), std::move(inner));
}

OpPtr difference_operator(OpPtr a, OpPtr b) {
    return std::make_shared<DifferenceOperator>(std::move(a), std::move(b));
}

Eigen::MatrixXcd materialize_dense(const MomentOperator& op) {
    std::int64_t d = op.dim();
    if (d > kMaxDenseMatrixDim)
        throw SizeLimitError("materialize_dense: dimension exceeds dense matrix guard");
    Eigen::MatrixXcd m(d, d);
#pragma omp parallel
    {
        std::vector<cplx> unit(size_t(d), cplx(0.0, 0.0)), col(static_cast<size_t>(d));
#pragma omp for schedule(static)
        for (std::int64_t j = 0; j < d; ++j) {
            unit[size_t(j)] = cplx(1.0, 0.0);
            op.apply(unit, col);
            unit[size_t(j)] = cplx(0.0, 0.0);
            for (std::int64_t i = 0; i < d; ++i) m(i, j) = col[size_t(i)];
        }
    }
    return m;
}

Eigen::MatrixXcd random_unitary(std::int64_t n, const CounterRng& rng) {
    Eigen::MatrixXcd g(n, n);
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < n; ++j) g(i, j) = rng.gaussian(std::uint64_t(i * n + j));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (std::int64_t i = 0; i < n; ++i) {
        cplx d = r(i, i);
        cplx phase = (std::abs(d) > 0.0) ? d / std::abs(d) : cplx(1.0, 0.0);
        q.col(i) *= phase;
    }
    return q;
}

std::vector<int> random_permutation(std::int64_t n, const CounterRng& rng) {
    std::vector<int> image(static_cast<size_t>(n));
    std::iota(image.begin(), image.end(), 0);
    for (std::int64_t i = n - 1; i > 0; --i)
        std::swap(image[size_t(i)], image[size_t(rng.below(std::uint64_t(i), std::uint64_t(i + 1)))]);
    return image;
}

} // namespace tpx
