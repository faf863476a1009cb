#include "tpx/spectral.hpp"

#include <cmath>

#include "tpx/kernels.hpp"

namespace tpx {

SpectralResult spectral_norm_map(const LinearMap& map, const SpectralOptions& opts) {
    std::int64_t d = map.dim;
    std::vector<cplx> x(static_cast<size_t>(d)), y(static_cast<size_t>(d)), z(static_cast<size_t>(d));

    CounterRng rng{opts.seed};
    for (std::int64_t i = 0; i < d; ++i) x[size_t(i)] = rng.gaussian(std::uint64_t(i));
    double xn = kernels::norm2(x);
    if (xn == 0.0) return {0.0, 0, 0.0, false};
    kernels::scale(x, cplx(1.0 / xn, 0.0));

    double sigma = 0.0, prev = -1.0;
    long it = 0;
    int stable = 0;
    bool converged = false;
    for (; it < opts.max_iterations; ++it) {
        map.apply(x, y); // y = A x
        sigma = kernels::norm2(y);
        if (sigma <= 1e-300) return {0.0, it + 1, 0.0, false};
        map.apply_adjoint(y, z); // z = A^dag A x
        double zn = kernels::norm2(z);
        if (zn == 0.0) return {0.0, it + 1, 0.0, false};

        if (prev >= 0.0 && std::abs(sigma - prev) <= opts.tol * std::max(sigma, 1e-30)) {
            if (++stable >= 2) {
                converged = true;
                break;
            }
        } else {
            stable = 0;
        }
        prev = sigma;
        std::copy(z.begin(), z.end(), x.begin());
        kernels::scale(x, cplx(1.0 / zn, 0.0));
    }

    // Rayleigh-quotient residual certificate on the final iterate.
    map.apply(x, y);
    sigma = kernels::norm2(y);
    map.apply_adjoint(y, z);
    kernels::axpy(cplx(-sigma * sigma, 0.0), x, z);
    double residual = kernels::norm2(z) / std::max(sigma * sigma, 1e-30);

    if (!converged) {
        if (opts.dense_fallback && d <= kMaxDenseMatrixDim) {
            Eigen::MatrixXcd m(d, d);
            std::vector<cplx> unit(size_t(d), cplx(0.0, 0.0)), col(static_cast<size_t>(d));
            for (std::int64_t j = 0; j < d; ++j) {
                unit[size_t(j)] = cplx(1.0, 0.0);
                map.apply(unit, col);
                unit[size_t(j)] = cplx(0.0, 0.0);
                for (std::int64_t i = 0; i < d; ++i) m(i, j) = col[size_t(i)];
            }
            return {dense_operator_norm(m), it, residual, true};
        }
        throw ConvergenceError("spectral_norm: power iteration did not converge", sigma, residual,
                               it);
    }
    return {sigma, it + 1, residual, false};
}

SpectralResult spectral_norm(const MomentOperator& op, const MomentOperator* deflate,
                             const SpectralOptions& opts) {
    std::int64_t d = op.dim();
    auto run = [&, d](std::span<const cplx> in, std::span<cplx> out, bool adjoint) {
        std::vector<cplx> t(in.begin(), in.end());
        std::vector<cplx> scratch(static_cast<size_t>(d));
        if (deflate) {
            deflate->apply(t, scratch);
            kernels::axpy(cplx(-1.0, 0.0), scratch, t);
        }
        if (adjoint)
            op.apply_adjoint(t, out);
        else
            op.apply(t, out);
        if (deflate) {
            deflate->apply(out, scratch);
            kernels::axpy(cplx(-1.0, 0.0), scratch, out);
        }
    };
    LinearMap map{d,
                  [&](std::span<const cplx> in, std::span<cplx> out) { run(in, out, false); },
                  [&](std::span<const cplx> in, std::span<cplx> out) { run(in, out, true); }};
    return spectral_norm_map(map, opts);
}

double dense_operator_norm(const Eigen::MatrixXcd& m) {
    if (m.rows() * m.cols() == 0) return 0.0;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

double dense_schatten1(const Eigen::MatrixXcd& m) {
    if (m.rows() * m.cols() == 0) return 0.0;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues().sum();
}

} // namespace tpx
