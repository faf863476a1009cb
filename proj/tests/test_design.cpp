#include <doctest.h>

#include <cmath>

#include "tpx/design.hpp"
#include "tpx/gap_analysis.hpp"
#include "tpx/spectral.hpp"

using namespace tpx;

namespace {

QuantumEnsemble inverse_closed_ensemble(std::int64_t n, std::uint64_t seed) {
    // closed under inverses, so the averaged operator is Hermitian
    CounterRng rng{seed};
    std::vector<int> pi = random_permutation(n, rng);
    std::vector<int> inv(static_cast<size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) inv[size_t(pi[size_t(i)])] = int(i);
    QuantumEnsemble ens;
    ens.n = n;
    ens.k = 1;
    ens.entries.push_back({PermGenerator{pi}, 0.25});
    ens.entries.push_back({PermGenerator{inv}, 0.25});
    // Fourier plus its inverse (the conjugate transform) as an explicit matrix
    std::vector<cplx> fc(size_t(n * n));
    for (std::int64_t r = 0; r < n; ++r)
        for (std::int64_t c = 0; c < n; ++c) {
            double ang = 2.0 * std::numbers::pi * double(r * c % n) / double(n);
            fc[size_t(r * n + c)] = cplx(std::cos(ang), -std::sin(ang)) / std::sqrt(double(n));
        }
    ens.entries.push_back({FourierGenerator{}, 0.25});
    ens.entries.push_back({ExplicitGenerator{fc}, 0.25});
    return ens;
}

} // namespace

TEST_CASE("iteration count") {
    CHECK(iteration_count(2, 1, 0.5, std::pow(2.0, -8.0)) == 10);
    CHECK(iteration_count(4, 1, 0.5, 1e-3) == 14); // ceil(log2(16/1e-3))
    CHECK(iteration_count(4, 1, 0.5, 1e9) == 1);   // already within target
    CHECK(iteration_count(4, 1, 0.5, 0.5e-3) == iteration_count(4, 1, 0.5, 1e-3) + 1);
    CHECK_THROWS_AS(iteration_count(4, 1, 1.0, 0.1), ArgumentError);
    CHECK_THROWS_AS(iteration_count(4, 1, 0.5, 0.0), ArgumentError);

    // smallest-m property around the analytic value
    for (double lam : {0.3, 0.7, 0.9}) {
        for (double eps : {1e-2, 1e-5}) {
            int m = iteration_count(5, 1, lam, eps);
            double logv = 2.0 * std::log(5.0) + double(m) * std::log(lam);
            CHECK(logv <= std::log(eps) + 1e-9);
            if (m > 1) {
                double prev = 2.0 * std::log(5.0) + double(m - 1) * std::log(lam);
                CHECK(prev > std::log(eps) - 1e-9);
            }
        }
    }
}

TEST_CASE("iterated moments") {
    QuantumEnsemble ens = inverse_closed_ensemble(4, 11);
    OpPtr once = ensemble_moment(ens);
    OpPtr alias = iterate_moment(ens, 1);
    Eigen::MatrixXcd a = materialize_dense(*once), b = materialize_dense(*alias);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-14);

    // deflated norm of the m-th power is the m-th power of the deflated
    // norm for this Hermitian (inverse-closed) ensemble
    TupleSpace space(4, 2);
    auto haar = haar_projector(space, 1);
    double base = spectral_norm(*once, haar.get(), {}).sigma;
    for (int m : {2, 3, 5}) {
        double powered = spectral_norm(*iterate_moment(ens, m), haar.get(), {}).sigma;
        CHECK(powered == doctest::Approx(std::pow(base, m)).epsilon(1e-6));
    }
}

TEST_CASE("design distance") {
    TupleSpace space(4, 2);
    auto haar = haar_projector(space, 1);
    CHECK(design_distance_1norm(*haar, space, 1) < 1e-10);

    OpPtr f = fourier_layer(space, 1);
    CHECK(design_distance_1norm(*f, space, 1) == doctest::Approx(15.0).epsilon(1e-8));

    CHECK_THROWS_AS(design_distance_1norm(*fourier_layer(TupleSpace(100, 2), 1),
                                          TupleSpace(100, 2), 1),
                    SizeLimitError);
}

TEST_CASE("norm chain 1-norm vs infinity-norm") {
    QuantumEnsemble ens = inverse_closed_ensemble(4, 23);
    TupleSpace space(4, 2);
    auto haar = haar_projector(space, 1);
    Eigen::MatrixXcd q = materialize_dense(*haar);
    for (int m : {1, 2, 4}) {
        Eigen::MatrixXcd diff = materialize_dense(*iterate_moment(ens, m)) - q;
        double one = dense_schatten1(diff);
        double inf = dense_operator_norm(diff);
        CHECK(one >= inf - 1e-12);
        CHECK(one <= double(space.dim()) * inf + 1e-9);
    }
}

TEST_CASE("design distance decreases monotonically") {
    PermDistribution nu;
    nu.n = 4;
    CounterRng rng{31};
    for (int i = 0; i < 3; ++i)
        nu.entries.push_back({random_permutation(4, rng.derive(std::uint64_t(i))), 1.0 / 3.0});
    auto [ens, report] = theorem_construction(nu, 1, std::nullopt, {});
    TupleSpace space(4, 2);
    double prev = 1e300;
    for (int m = 1; m <= 6; ++m) {
        double d = design_distance_1norm(*iterate_moment(ens, m), space, 1);
        CHECK(d <= prev + 1e-9);
        prev = d;
    }
    (void)report;
}

TEST_CASE("word sampling") {
    QuantumEnsemble ens = inverse_closed_ensemble(4, 5);
    std::vector<int> w1 = sample_word(ens, 32, 77);
    std::vector<int> w2 = sample_word(ens, 32, 77);
    CHECK(w1 == w2);
    CHECK(w1.size() == 32);
    for (int g : w1) {
        CHECK(g >= 0);
        CHECK(g < ens.degree());
    }
    std::vector<int> w3 = sample_word(ens, 32, 78);
    CHECK(w1 != w3); // different seed, different word (overwhelmingly)
}

TEST_CASE("design spec assembly") {
    QuantumEnsemble ens = inverse_closed_ensemble(4, 9);
    DesignSpec spec = make_design_spec(ens, "base.json", 0.5, 1e-3);
    CHECK(spec.m == 14);
    CHECK(spec.word_count == word_count_decimal(4, 14));
    CHECK(spec.base_ref == "base.json");
    CHECK(word_count_decimal(2, 10) == "1024");
}
