#ifndef TPX_SPECTRAL_HPP
#define TPX_SPECTRAL_HPP

#include <cstdint>
#include <functional>
#include <span>

#include <Eigen/Dense>

#include "tpx/moment_ops.hpp"

namespace tpx {

struct SpectralOptions {
    double tol = 1e-9;        // relative change of the singular value estimate
    long max_iterations = 10000;
    std::uint64_t seed = 12345;
    bool dense_fallback = true; // dense SVD when power iteration stalls and dim <= 4096
};

struct SpectralResult {
    double sigma = 0.0;
    long iterations = 0;
    double residual = 0.0; // ||A^dag A x - sigma^2 x|| / max(sigma^2, eps)
    bool used_dense_fallback = false;
};

// Any linear map with an adjoint, small enough to act on dense vectors.
struct LinearMap {
    std::int64_t dim = 0;
    std::function<void(std::span<const cplx>, std::span<cplx>)> apply;
    std::function<void(std::span<const cplx>, std::span<cplx>)> apply_adjoint;
};

// Largest singular value via power iteration on A^dag A with a
// counter-seeded start vector; certified by a final Rayleigh-quotient
// residual. Falls back to a dense SVD when the iteration stalls and the
// dimension permits; otherwise throws ConvergenceError carrying the last
// iterate's value and residual.
SpectralResult spectral_norm_map(const LinearMap& map, const SpectralOptions& opts = {});

// Same for A = (1-Q) op (1-Q) with optional deflation projector Q.
SpectralResult spectral_norm(const MomentOperator& op, const MomentOperator* deflate,
                             const SpectralOptions& opts = {});

// Largest singular value / Schatten 1-norm of a dense matrix.
double dense_operator_norm(const Eigen::MatrixXcd& m);
double dense_schatten1(const Eigen::MatrixXcd& m);

} // namespace tpx

#endif
