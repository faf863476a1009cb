#include "tpx/gap_analysis.hpp"

#include <algorithm>
#include <cmath>

#include "tpx/fourier_elements.hpp"
#include "tpx/kernels.hpp"

namespace tpx {

GapReport classical_gap(const PermDistribution& nu, int copies, const GapOptions& opts) {
    nu.validate();
    if (copies < 1) throw ArgumentError("classical_gap: copies must be >= 1");
    TupleSpace space(nu.n, copies);
    if (space.dim() > kMaxDenseVectorDim)
        throw SizeLimitError("classical_gap: dimension exceeds dense vector guard");
    std::int64_t dim = space.dim();
    std::int64_t n = nu.n;

    PartitionIndex patterns(copies);
    std::int64_t num_classes = patterns.size();

    // class id and within-class position of every tuple
    std::vector<std::int32_t> class_of(static_cast<size_t>(dim));
    std::vector<std::int64_t> local_pos(static_cast<size_t>(dim));
    std::vector<std::int64_t> class_count(size_t(num_classes), 0);
    {
        std::vector<int> tuple(static_cast<size_t>(copies)), ids(static_cast<size_t>(copies));
        for (std::int64_t t = 0; t < dim; ++t) {
            space.decode(t, tuple);
            equality_pattern_ids(tuple, ids);
            std::int32_t c = std::int32_t(patterns.position_of_ids(ids));
            class_of[size_t(t)] = c;
            local_pos[size_t(t)] = class_count[size_t(c)]++;
        }
    }
    std::vector<std::vector<std::int64_t>> elems(static_cast<size_t>(num_classes));
    for (std::int64_t c = 0; c < num_classes; ++c) elems[size_t(c)].resize(size_t(class_count[size_t(c)]));
    {
        for (std::int64_t t = 0; t < dim; ++t)
            elems[size_t(class_of[size_t(t)])][size_t(local_pos[size_t(t)])] = t;
    }

    std::vector<std::vector<int>> inverse_images, forward_images;
    std::vector<double> weights;
    for (const auto& e : nu.entries) {
        std::vector<int> inv(static_cast<size_t>(n));
        for (std::int64_t i = 0; i < n; ++i) inv[size_t(e.image[size_t(i)])] = int(i);
        inverse_images.push_back(std::move(inv));
        forward_images.push_back(e.image);
        weights.push_back(e.weight);
    }

    GapReport report;
    report.n = n;
    report.k = copies;
    report.d = nu.degree();
    report.method = "blockwise";
    report.seed = opts.seed;

    double best = 0.0;
    double best_residual = 0.0;
    std::string argmax;
    for (std::int64_t c = 0; c < num_classes; ++c) {
        std::int64_t sz = class_count[size_t(c)];
        if (sz == 0) continue;
        double lam_c = 0.0;
        double res_c = 0.0;
        if (sz > 1) {
            const auto& members = elems[size_t(c)];
            int g_count = nu.degree();
            // Local gather tables: row g holds the within-class position of
            // g^{-1} (resp. g) applied to each member, so each iteration is
            // a pure table gather.
            auto build_tables = [&](const std::vector<std::vector<int>>& maps) {
                std::vector<std::int32_t> tables(size_t(g_count) * size_t(sz));
#pragma omp parallel for schedule(static) if (sz > 16384)
                for (std::int64_t i = 0; i < sz; ++i) {
                    std::int64_t t = members[size_t(i)];
                    for (int g = 0; g < g_count; ++g) {
                        std::int64_t rest = t, src = 0, place = 1;
                        for (int f = copies - 1; f >= 0; --f) {
                            src += std::int64_t(maps[size_t(g)][size_t(rest % n)]) * place;
                            rest /= n;
                            place *= n;
                        }
                        tables[size_t(g) * size_t(sz) + size_t(i)] =
                            std::int32_t(local_pos[size_t(src)]);
                    }
                }
                return tables;
            };
            std::vector<std::int32_t> inv_tables = build_tables(inverse_images);
            std::vector<std::int32_t> fwd_tables = build_tables(forward_images);

            // The averaged action fixes constants on both sides, so
            // (1-P) E (1-P) x = E x - mean(E x) * 1: one gather pass plus
            // an output mean subtraction.
            auto class_apply = [&](std::span<const cplx> in, std::span<cplx> out,
                                   const std::vector<std::int32_t>& tables) {
#pragma omp parallel for schedule(static) if (sz > 16384)
                for (std::int64_t i = 0; i < sz; ++i) {
                    cplx acc(0.0, 0.0);
                    for (int g = 0; g < g_count; ++g)
                        acc += weights[size_t(g)] *
                               in[size_t(tables[size_t(g) * size_t(sz) + size_t(i)])];
                    out[size_t(i)] = acc;
                }
                cplx mean = kernels::sum(out) / double(sz);
#pragma omp parallel for schedule(static) if (sz > 16384)
                for (std::int64_t i = 0; i < sz; ++i) out[size_t(i)] -= mean;
            };
            LinearMap map{sz,
                          [&](std::span<const cplx> in, std::span<cplx> out) {
                              class_apply(in, out, inv_tables);
                          },
                          [&](std::span<const cplx> in, std::span<cplx> out) {
                              class_apply(in, out, fwd_tables);
                          }};
            SpectralOptions so{opts.tol, opts.max_iterations,
                               CounterRng{opts.seed}.derive(std::uint64_t(c)).seed, true};
            SpectralResult r = spectral_norm_map(map, so);
            lam_c = r.sigma;
            res_c = r.residual;
        }
        report.class_lambdas.push_back({patterns.at(c).serialize(), lam_c});
        if (argmax.empty() || lam_c > best) {
            best = lam_c;
            best_residual = res_c;
            argmax = patterns.at(c).serialize();
        }
    }
    report.lambda = best;
    report.residual = best_residual;
    report.argmax_class = argmax;
    report.eps_c = 1.0 - best;
    return report;
}

GapReport quantum_gap(const QuantumEnsemble& ens, const GapOptions& opts) {
    ens.validate();
    if (ens.n < ens.k) throw RegimeError("quantum_gap: requires N >= k");
    TupleSpace space(ens.n, 2 * ens.k);
    if (space.dim() > kMaxDenseVectorDim)
        throw SizeLimitError("quantum_gap: dimension exceeds dense vector guard");
    OpPtr moment = ensemble_moment(ens);
    auto haar = haar_projector(space, ens.k);

    SpectralOptions so{opts.tol, opts.max_iterations, opts.seed, true};
    SpectralResult r = spectral_norm(*moment, haar.get(), so);

    GapReport report;
    report.n = ens.n;
    report.k = ens.k;
    report.d = ens.degree();
    report.lambda = r.sigma;
    report.method = "matrixfree";
    report.residual = r.residual;
    report.seed = opts.seed;
    return report;
}

double lemma_bound(std::int64_t n, int k) {
    return 2.0 * std::pow(double(2 * k), double(4 * k)) / std::sqrt(double(n));
}

GapReport lemma_gap_lambda_A(std::int64_t n, int k, LemmaMethod method, const GapOptions& opts) {
    if (k < 1) throw ArgumentError("lemma_gap: k must be >= 1");
    GapReport report;
    report.n = n;
    report.k = k;
    report.seed = opts.seed;
    double bound = lemma_bound(n, k);
    if (bound < 1.0) {
        report.bound = bound;
        report.eps_a = 1.0 - bound;
        report.eps_a_source = "analytic";
    } else {
        report.bound_vacuous = true;
    }

    if (method == LemmaMethod::ibasis) {
        if (n < 2 * k) throw RegimeError("lemma_gap (ibasis): requires N >= 2k");
        report.method = "ibasis";
        PartitionIndex idx(2 * k);
        std::int64_t b = idx.size();
        Eigen::MatrixXd m = i_element_matrix(idx, n, k);

        // V_{U(N)} spanned by the E_{P(pi)} states expanded in the I-basis.
        auto perms = all_permutations(k);
        std::int64_t r = std::int64_t(perms.size());
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(b, r);
        double nk = std::pow(double(n), double(k));
        for (std::int64_t pi = 0; pi < r; ++pi) {
            SetPartition pp = perm_partition(perms[size_t(pi)]);
            for (const SetPartition& coarse : coarsenings(pp)) {
                double isz = 1.0;
                for (int i = 0; i < coarse.block_count(); ++i) isz *= double(n - i);
                w(idx.position(coarse), pi) = std::sqrt(isz / nk);
            }
        }
        Eigen::MatrixXd gram = w.transpose() * w;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
        Eigen::VectorXd inv = Eigen::VectorXd::Zero(r);
        double emax = es.eigenvalues()(r - 1);
        for (std::int64_t i = 0; i < r; ++i)
            if (es.eigenvalues()(i) > emax * 1e-12) inv(i) = 1.0 / es.eigenvalues()(i);
        Eigen::MatrixXd pinv = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
        Eigen::MatrixXd q = w * pinv * w.transpose();
        Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(b, b) - q;
        Eigen::MatrixXd compressed = proj * m * proj;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> comp(compressed);
        double lam = 0.0;
        for (std::int64_t i = 0; i < b; ++i) lam = std::max(lam, std::abs(comp.eigenvalues()(i)));
        report.lambda = lam;
        report.residual = 0.0;
    } else {
        report.method = "dense";
        TupleSpace space(n, 2 * k);
        if (space.dim() > kMaxDenseMatrixDim)
            throw SizeLimitError("lemma_gap (dense): requires N^{2k} <= 4096");
        OpPtr sym = symmetric_projector(space);
        OpPtr haar = haar_projector(space, k);
        OpPtr p = difference_operator(sym, haar);
        OpPtr compressed = sandwich_operator(p, fourier_layer(space, k));
        SpectralOptions so{opts.tol, opts.max_iterations, opts.seed, true};
        SpectralResult r = spectral_norm(*compressed, nullptr, so);
        report.lambda = r.sigma;
        report.residual = r.residual;
    }
    return report;
}

double combine_gap_bound(double eps_c, double eps_a, double p) {
    if (!(eps_c > 0.0 && eps_c <= 1.0) || !(eps_a > 0.0 && eps_a <= 1.0))
        throw ArgumentError("combine_gap_bound: eps arguments must lie in (0, 1]");
    if (!(p > 0.0 && p < 1.0))
        throw ArgumentError("combine_gap_bound: p must lie in (0, 1)");
    return 1.0 - (eps_a / 12.0) * std::min(p * eps_c, 1.0 - p);
}

std::pair<QuantumEnsemble, GapReport> theorem_construction(const PermDistribution& nu_c, int k,
                                                           std::optional<double> p,
                                                           const GapOptions& opts) {
    nu_c.validate();
    if (k < 1) throw ArgumentError("theorem_construction: k must be >= 1");

    GapReport classical = classical_gap(nu_c, 2 * k, opts);
    double eps_c = *classical.eps_c;

    double p_used;
    if (p) {
        if (!(*p > 0.0 && *p < 1.0))
            throw ArgumentError("theorem_construction: p must lie in (0, 1)");
        p_used = *p;
    } else {
        if (eps_c <= 0.0)
            throw ArgumentError("theorem_construction: measured eps_C <= 0, cannot set p = 1/(1+eps_C)");
        p_used = 1.0 / (1.0 + eps_c);
    }

    QuantumEnsemble ens;
    ens.n = nu_c.n;
    ens.k = k;
    for (const auto& e : nu_c.entries)
        ens.entries.push_back({PermGenerator{e.image}, p_used * e.weight});
    ens.entries.push_back({FourierGenerator{}, 1.0 - p_used});
    ens.validate();

    GapReport report;
    report.n = nu_c.n;
    report.k = k;
    report.d = nu_c.degree() + 1;
    report.method = "matrixfree";
    report.seed = opts.seed;
    report.eps_c = eps_c;
    report.p = p_used;

    double eps_a_analytic = 1.0 - lemma_bound(nu_c.n, k);
    if (eps_a_analytic > 0.0) {
        report.eps_a = eps_a_analytic;
        report.eps_a_source = "analytic";
    } else {
        report.bound_vacuous = true;
        // measured substitution: Lemma 2.1 only needs ||P Y P|| <= 1 - eps_A,
        // which the measured lambda_A certifies directly.
        if (nu_c.n >= 2 * k) {
            GapReport lemma = lemma_gap_lambda_A(nu_c.n, k, LemmaMethod::ibasis, opts);
            report.eps_a = 1.0 - *lemma.lambda;
            report.eps_a_source = "measured";
        }
    }

    if (report.eps_a && *report.eps_a > 0.0 && eps_c > 0.0)
        report.bound = combine_gap_bound(eps_c, *report.eps_a, p_used);

    TupleSpace space(nu_c.n, 2 * k);
    if (opts.measure_quantum && space.dim() <= kMaxDenseVectorDim) {
        GapReport q = quantum_gap(ens, opts);
        report.lambda = q.lambda;
        report.residual = q.residual;
    }
    return {std::move(ens), std::move(report)};
}

} // namespace tpx
