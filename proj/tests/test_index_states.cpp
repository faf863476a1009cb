#include <doctest.h>

#include <cmath>

#include "tpx/kernels.hpp"
#include "tpx/tuple_space.hpp"

using namespace tpx;

TEST_CASE("tuple space encode/decode round trip") {
    TupleSpace space(5, 3);
    CHECK(space.dim() == 125);
    std::vector<int> tuple(3);
    for (std::int64_t t = 0; t < space.dim(); ++t) {
        space.decode(t, tuple);
        CHECK(space.encode(tuple) == t);
    }
    // big-endian packing: first entry most significant
    std::vector<int> probe{1, 0, 0};
    CHECK(space.encode(probe) == 25);

    CHECK_THROWS_AS(TupleSpace(2, 64), SizeLimitError);
    CHECK_THROWS_AS(TupleSpace(1, 2), ArgumentError);
}

TEST_CASE("class sizes") {
    SetPartition p = SetPartition::parse("1,2|3");
    CHECK(class_size_I(p, 5) == 20);
    CHECK(class_size_E(p, 5) == 25);
    CHECK(class_size_I(SetPartition::top(4), 7) == 7);
    CHECK(class_size_E(SetPartition::top(4), 7) == 7);
    CHECK(class_size_I(SetPartition::bottom(4), 3) == 0);

    // stirling split: sum of I-sizes over coarsenings equals the E-size
    PartitionIndex idx(4);
    for (std::int64_t i = 0; i < idx.size(); ++i)
        for (std::int64_t n = 6; n <= 12; ++n) {
            int128 total = 0;
            for (const SetPartition& c : coarsenings(idx.at(i))) total += class_size_I(c, n);
            CHECK(total == class_size_E(idx.at(i), n));
        }
}

TEST_CASE("equality pattern") {
    std::vector<int> a{3, 3, 5, 7};
    CHECK(equality_pattern(a) == SetPartition::parse("1,2|3|4"));
    std::vector<int> b{2, 2, 2};
    CHECK(equality_pattern(b) == SetPartition::top(3));
    std::vector<int> c{0, 4, 2, 9};
    CHECK(equality_pattern(c) == SetPartition::bottom(4));
}

TEST_CASE("class states") {
    TupleSpace space(2, 2);
    StateVector bell_pair = build_state_I(SetPartition::top(2), space);
    double r = 1.0 / std::sqrt(2.0);
    CHECK(bell_pair.amp[0] == cplx(r, 0.0));
    CHECK(bell_pair.amp[1] == cplx(0.0, 0.0));
    CHECK(bell_pair.amp[2] == cplx(0.0, 0.0));
    CHECK(bell_pair.amp[3] == cplx(r, 0.0));

    CHECK_THROWS_AS(build_state_I(SetPartition::bottom(4), TupleSpace(3, 4)),
                    DegenerateClassError);

    TupleSpace sp(5, 4);
    PartitionIndex idx(4);
    std::vector<StateVector> i_states;
    for (std::int64_t i = 0; i < idx.size(); ++i)
        i_states.push_back(build_state_I(idx.at(i), sp));
    for (size_t a2 = 0; a2 < i_states.size(); ++a2)
        for (size_t b2 = 0; b2 < i_states.size(); ++b2) {
            double want = a2 == b2 ? 1.0 : 0.0;
            CHECK(std::abs(kernels::dot(i_states[a2].amp, i_states[b2].amp) - want) < 1e-12);
        }
}

TEST_CASE("i_in_e coefficients") {
    // single coefficient 1 on the top class
    auto top_coeffs = i_in_e_coeffs(SetPartition::top(4), 6);
    std::int64_t nonzero = 0;
    for (const auto& c : top_coeffs)
        if (c.mu != 0) ++nonzero;
    REQUIRE(nonzero == 1);
    CHECK(top_coeffs[0].value == doctest::Approx(1.0).epsilon(1e-14));

    // 2k = 2, bottom, N = 3: (sqrt(9/6), -sqrt(3/6)) on (E_bottom, E_top)
    auto coeffs = i_in_e_coeffs(SetPartition::bottom(2), 3);
    REQUIRE(coeffs.size() == 2);
    for (const auto& c : coeffs) {
        if (c.coarse == SetPartition::bottom(2)) {
            CHECK(c.mu == 1);
            CHECK(c.value == doctest::Approx(std::sqrt(9.0 / 6.0)).epsilon(1e-14));
        } else {
            CHECK(c.mu == -1);
            CHECK(c.value == doctest::Approx(-std::sqrt(3.0 / 6.0)).epsilon(1e-14));
        }
    }

    CHECK_THROWS_AS(i_in_e_coeffs(SetPartition::bottom(4), 3), RegimeError);

    // dense reconstruction at N = 5, 2k = 4
    TupleSpace space(5, 4);
    PartitionIndex idx(4);
    for (std::int64_t i = 0; i < idx.size(); ++i) {
        StateVector want = build_state_I(idx.at(i), space);
        StateVector got(space);
        for (const IECoefficient& c : i_in_e_coeffs(idx.at(i), 5)) {
            StateVector e = build_state_E(c.coarse, space);
            kernels::axpy(cplx(c.value, 0.0), e.amp, got.amp);
        }
        kernels::axpy(cplx(-1.0, 0.0), got.amp, want.amp);
        CHECK(kernels::norm2(want.amp) < 1e-12);
    }
}

TEST_CASE("e-state expansion in i-states") {
    TupleSpace space(5, 4);
    PartitionIndex idx(4);
    for (std::int64_t i = 0; i < idx.size(); ++i) {
        const SetPartition& p = idx.at(i);
        StateVector lhs = build_state_E(p, space);
        kernels::scale(lhs.amp, std::sqrt(double(class_size_E(p, 5))));
        StateVector rhs(space);
        for (const SetPartition& c : coarsenings(p)) {
            StateVector ic = build_state_I(c, space);
            kernels::axpy(cplx(std::sqrt(double(class_size_I(c, 5))), 0.0), ic.amp, rhs.amp);
        }
        kernels::axpy(cplx(-1.0, 0.0), rhs.amp, lhs.amp);
        CHECK(kernels::norm2(lhs.amp) < 1e-12);
    }
}

TEST_CASE("i classes partition the tuple space") {
    for (int twok = 2; twok <= 4; twok += 2)
        for (std::int64_t n = 2; n <= 8; ++n) {
            PartitionIndex idx(twok);
            int128 total = 0;
            for (std::int64_t i = 0; i < idx.size(); ++i) total += class_size_I(idx.at(i), n);
            CHECK(total == pow_int128(n, twok));
        }
}
