#include <doctest.h>

#include <cmath>

#include "tpx/fourier_elements.hpp"

using namespace tpx;

namespace {
SetPartition parse(const std::string& s) { return SetPartition::parse(s); }
} // namespace

TEST_CASE("signed dot") {
    std::vector<int> a{1, 1}, b{1, 1};
    CHECK(signed_dot(a, b, 1) == 0);
    std::vector<int> c{1, 0}, d{2, 5};
    CHECK(signed_dot(c, d, 1) == 2);
    std::vector<int> e{1, 2, 3};
    CHECK_THROWS_AS(signed_dot(e, e, 1), ArgumentError);
}

TEST_CASE("constraint matrices") {
    SignedConstraintMatrix top1 = constraint_matrix(SetPartition::top(2), 1);
    REQUIRE(top1.rows == 1);
    CHECK(top1.at(0, 0) == 1);
    CHECK(top1.at(0, 1) == -1);

    SignedConstraintMatrix bot1 = constraint_matrix(SetPartition::bottom(2), 1);
    REQUIRE(bot1.rows == 2);
    CHECK(bot1.at(0, 0) == 1);
    CHECK(bot1.at(0, 1) == 0);
    CHECK(bot1.at(1, 0) == 0);
    CHECK(bot1.at(1, 1) == -1);

    // full matrices have entries in {0, 1, -1}
    for (int k = 1; k <= 3; ++k) {
        PartitionIndex idx(2 * k);
        for (std::int64_t i = 0; i < idx.size(); ++i) {
            SignedConstraintMatrix m = constraint_matrix(idx.at(i), k);
            for (std::int64_t v : m.a) CHECK(std::abs(v) <= 1);
        }
    }

    SignedConstraintMatrix red = reduced_constraint_matrix(SetPartition::bottom(2),
                                                           SetPartition::bottom(2), 1);
    CHECK(red.at(0, 0) == 1);
    CHECK(red.at(0, 1) == 0);
    CHECK(red.at(1, 0) == 0);
    CHECK(red.at(1, 1) == -1);

    // reduced entries bounded by 2k
    for (int k = 1; k <= 2; ++k) {
        PartitionIndex idx(2 * k);
        for (std::int64_t i = 0; i < idx.size(); ++i)
            for (std::int64_t j = 0; j < idx.size(); ++j) {
                SignedConstraintMatrix m = reduced_constraint_matrix(idx.at(i), idx.at(j), k);
                for (std::int64_t v : m.a) CHECK(std::abs(v) <= 2 * k);
            }
    }
}

TEST_CASE("reduced matrix vanishes exactly on pairs dominating a common pair partition") {
    for (int k = 1; k <= 3; ++k) {
        PartitionIndex idx(2 * k);
        std::vector<SetPartition> perm_classes;
        for (const auto& pi : all_permutations(k)) perm_classes.push_back(perm_partition(pi));
        for (const SetPartition& pp : perm_classes) {
            SignedConstraintMatrix m = reduced_constraint_matrix(pp, pp, k);
            for (std::int64_t v : m.a) CHECK(v == 0);
        }
        // exhaustive equivalence with the common-coarsening condition
        for (std::int64_t i = 0; i < idx.size(); ++i)
            for (std::int64_t j = 0; j < idx.size(); ++j) {
                SignedConstraintMatrix m = reduced_constraint_matrix(idx.at(i), idx.at(j), k);
                bool zero = std::all_of(m.a.begin(), m.a.end(),
                                        [](std::int64_t v) { return v == 0; });
                bool dominated = false;
                for (const SetPartition& pp : perm_classes)
                    if (is_refinement(pp, idx.at(i)) && is_refinement(pp, idx.at(j)))
                        dominated = true;
                CHECK(zero == dominated);
            }
    }
}

TEST_CASE("congruence counting") {
    SignedConstraintMatrix one_row{1, 2, {1, -1}};
    CHECK(count_congruence_solutions(one_row, SetPartition::bottom(2), 7) == 7);

    SignedConstraintMatrix zero{1, 3, {0, 0, 0}};
    CHECK(count_congruence_solutions(zero, SetPartition::bottom(3), 5) == 125);

    // 2x == 0 mod 6 has gcd(2,6) = 2 roots, times 6 free values for y
    SignedConstraintMatrix doubled{1, 2, {2, 0}};
    CHECK(count_congruence_solutions(doubled, SetPartition::bottom(2), 6) == 12);
    CHECK(count_congruence_bruteforce(doubled, 6) == 12);
    CHECK(count_congruence_snf(doubled).exact(6) == 12);

    // SNF equals brute force on every reduced pair, k <= 2
    for (int k = 1; k <= 2; ++k) {
        PartitionIndex idx(2 * k);
        for (std::int64_t n : {std::int64_t(5), std::int64_t(6), std::int64_t(8)}) {
            bool ok = true;
            for (std::int64_t i = 0; i < idx.size(); ++i)
                for (std::int64_t j = 0; j < idx.size(); ++j) {
                    SignedConstraintMatrix red =
                        reduced_constraint_matrix(idx.at(i), idx.at(j), k);
                    ok = ok && count_congruence_bruteforce(red, n) ==
                                   count_congruence_snf(red).exact(n);
                }
            CHECK(ok);
        }
    }

    // full (2k-column) form reduces against p2 internally
    SignedConstraintMatrix full = constraint_matrix(SetPartition::top(2), 1);
    CHECK(count_congruence_solutions(full, SetPartition::bottom(2), 9) == 9);
    CHECK(count_congruence_solutions(full, SetPartition::top(2), 9) == 9);
}

TEST_CASE("e matrix elements") {
    // exact 1 on pair-partition diagonal pairs
    for (int k = 1; k <= 3; ++k)
        for (const auto& pi : all_permutations(k)) {
            SetPartition pp = perm_partition(pi);
            CHECK(e_matrix_element(pp, pp, 13, k).value == doctest::Approx(1.0).epsilon(1e-14));
        }

    // k=1 bottom/bottom at N=3: 1/3, matching the dense phase-sum oracle
    double counted = e_matrix_element(SetPartition::bottom(2), SetPartition::bottom(2), 3, 1).value;
    double dense = e_matrix_element_dense(SetPartition::bottom(2), SetPartition::bottom(2), 3, 1).value;
    CHECK(counted == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(counted == doctest::Approx(dense).epsilon(1e-12));

    // stratum bound at |P1|+|P2| = 2k away from pair partitions
    for (std::int64_t n : {std::int64_t(5), std::int64_t(7), std::int64_t(16)}) {
        PartitionIndex idx(4);
        std::vector<SetPartition> perm_classes;
        for (const auto& pi : all_permutations(2)) perm_classes.push_back(perm_partition(pi));
        for (std::int64_t i = 0; i < idx.size(); ++i)
            for (std::int64_t j = 0; j < idx.size(); ++j) {
                if (idx.at(i).block_count() + idx.at(j).block_count() != 4) continue;
                bool is_pp = i == j && std::count(perm_classes.begin(), perm_classes.end(),
                                                  idx.at(i)) > 0;
                if (is_pp) continue;
                CHECK(e_matrix_element(idx.at(i), idx.at(j), n, 2).value <= 4.0 / double(n) + 1e-12);
            }
    }
}

TEST_CASE("i matrix elements") {
    for (std::int64_t n : {std::int64_t(2), std::int64_t(5), std::int64_t(16)})
        CHECK(i_matrix_element(SetPartition::top(2), SetPartition::top(2), n, 1).real() ==
              doctest::Approx(1.0).epsilon(1e-13));

    for (std::int64_t n : {std::int64_t(3), std::int64_t(4), std::int64_t(8)})
        CHECK(std::abs(i_matrix_element(SetPartition::bottom(2), SetPartition::bottom(2), n, 1)) <
              1e-12);

    CHECK_THROWS_AS(i_matrix_element(SetPartition::bottom(4), SetPartition::bottom(4), 3, 2),
                    RegimeError);

    // full matrix against the dense phase-sum oracle at k=2, N=8
    PartitionIndex idx(4);
    Eigen::MatrixXd m = i_element_matrix(idx, 8, 2);
    for (std::int64_t i = 0; i < idx.size(); ++i)
        for (std::int64_t j = 0; j < idx.size(); ++j) {
            std::complex<double> oracle = i_matrix_element_dense(idx.at(i), idx.at(j), 8, 2);
            CHECK(std::abs(oracle.imag()) < 1e-12);
            CHECK(m(i, j) == doctest::Approx(oracle.real()).epsilon(1e-10));
        }
}

TEST_CASE("lemma-style element properties hold exhaustively") {
    for (int k = 1; k <= 2; ++k) {
        PartitionIndex idx(2 * k);
        for (std::int64_t n : {std::int64_t(5), std::int64_t(8), std::int64_t(16)}) {
            bool nonneg = true, sym = true, bound = true;
            for (std::int64_t i = 0; i < idx.size(); ++i)
                for (std::int64_t j = 0; j < idx.size(); ++j) {
                    double v = e_matrix_element(idx.at(i), idx.at(j), n, k).value;
                    double vt = e_matrix_element(idx.at(j), idx.at(i), n, k).value;
                    nonneg = nonneg && v >= -1e-12;
                    sym = sym && std::abs(v - vt) <= 1e-12;
                    int s = idx.at(i).block_count() + idx.at(j).block_count();
                    bound = bound &&
                            v <= std::pow(double(n), -0.5 * std::abs(2.0 * k - s)) + 1e-12;
                }
            CHECK(nonneg);
            CHECK(sym);
            CHECK(bound);
        }
    }
}
