#ifndef TPX_GAP_ANALYSIS_HPP
#define TPX_GAP_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tpx/moment_ops.hpp"
#include "tpx/spectral.hpp"

namespace tpx {

struct GapOptions {
    std::uint64_t seed = 12345;
    double tol = 1e-9;
    long max_iterations = 10000;
    bool measure_quantum = true; // theorem_construction: skip the big measurement if false
};

struct GapReport {
    std::int64_t n = 0;
    int k = 0;
    int d = 0;
    std::optional<double> lambda;
    std::optional<double> bound;  // numeric only when < 1
    bool bound_vacuous = false;   // analytic bound >= 1
    std::optional<double> eps_c;
    std::optional<double> eps_a;
    std::optional<double> p;
    std::string eps_a_source; // "analytic" | "measured" | ""
    std::string method;       // blockwise | ibasis | dense | matrixfree
    double residual = 0.0;
    std::uint64_t seed = 0;

    // blockwise extras: per-class second singular values and the argmax
    // class (ties resolved by canonical partition order).
    std::vector<std::pair<std::string, double>> class_lambdas;
    std::string argmax_class;
};

// Classical 2k-copy gap, one deflated power iteration per equality class;
// lambda is the maximum over classes.
GapReport classical_gap(const PermDistribution& nu, int copies, const GapOptions& opts = {});

// ||(1-Q) E_nu (1-Q)|| with Q the Haar projector. Every generator fixes
// the Haar space pointwise, so this equals ||E_nu - E_Haar||.
GapReport quantum_gap(const QuantumEnsemble& ens, const GapOptions& opts = {});

enum class LemmaMethod { ibasis, dense };

// lambda_A = ||(E_S - E_U) F^{k,k} (E_S - E_U)||, with the analytic bound
// 2 (2k)^{4k} / sqrt(N) attached (flagged vacuous when >= 1).
GapReport lemma_gap_lambda_A(std::int64_t n, int k, LemmaMethod method,
                             const GapOptions& opts = {});

double lemma_bound(std::int64_t n, int k);

// 1 - (eps_A / 12) min(p eps_C, 1 - p); eps arguments in (0, 1], p in (0, 1).
double combine_gap_bound(double eps_c, double eps_a, double p);

// Mix a measured classical 2k-TPE with the Fourier point mass:
// nu_Q = p nu_C + (1-p) delta_F. p = 1/(1+eps_C) when unset. When the
// analytic eps_A is vacuous, the measured 1 - lambda_A is substituted and
// labelled as such.
std::pair<QuantumEnsemble, GapReport> theorem_construction(const PermDistribution& nu_c, int k,
                                                           std::optional<double> p,
                                                           const GapOptions& opts = {});

} // namespace tpx

#endif
