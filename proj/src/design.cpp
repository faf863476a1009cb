#include "tpx/design.hpp"

#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

#include "tpx/spectral.hpp"

namespace tpx {

int iteration_count(std::int64_t n, int k, double lambda, double eps) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw ArgumentError("iteration_count: lambda must lie in (0, 1)");
    if (!(eps > 0.0)) throw ArgumentError("iteration_count: eps must be positive");
    // m solves N^{2k} lambda^m = eps; in logs to avoid overflow.
    double target = 2.0 * double(k) * std::log(double(n)) - std::log(eps);
    double rate = -std::log(lambda);
    if (target <= 0.0) return 1;
    int m = std::max(1, int(std::ceil(target / rate - 1e-9)));
    while (double(m) * rate < target - 1e-12) ++m;
    return m;
}

OpPtr iterate_moment(const QuantumEnsemble& ens, int m) {
    if (m < 1) throw ArgumentError("iterate_moment: m must be >= 1");
    return power_operator(ensemble_moment(ens), m);
}

double design_distance_1norm(const MomentOperator& op, const TupleSpace& space, int k) {
    if (space.dim() > kMaxDenseMatrixDim)
        throw SizeLimitError("design_distance_1norm: requires N^{2k} <= 4096");
    Eigen::MatrixXcd dense = materialize_dense(op);
    Eigen::MatrixXcd haar = materialize_dense(*haar_projector(space, k));
    return dense_schatten1(dense - haar);
}

std::vector<int> sample_word(const QuantumEnsemble& ens, int m, std::uint64_t seed) {
    if (m < 1) throw ArgumentError("sample_word: m must be >= 1");
    ens.validate();
    std::vector<double> cdf;
    double acc = 0.0;
    for (const auto& e : ens.entries) {
        acc += e.weight;
        cdf.push_back(acc);
    }
    cdf.back() = 1.0;
    CounterRng rng{seed};
    std::vector<int> word(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        double u = rng.uniform(std::uint64_t(i));
        int g = 0;
        while (u >= cdf[size_t(g)] && g + 1 < int(cdf.size())) ++g;
        word[size_t(i)] = g;
    }
    return word;
}

std::string word_count_decimal(int degree, int m) {
    boost::multiprecision::cpp_int count = 1;
    for (int i = 0; i < m; ++i) count *= degree;
    return count.str();
}

DesignSpec make_design_spec(const QuantumEnsemble& ens, const std::string& base_ref,
                            double lambda, double eps) {
    DesignSpec spec;
    spec.base_ref = base_ref;
    spec.lambda_used = lambda;
    spec.epsilon_target = eps;
    spec.m = iteration_count(ens.n, ens.k, lambda, eps);
    spec.word_count = word_count_decimal(ens.degree(), spec.m);
    return spec;
}

} // namespace tpx
