#include "tpx/tuple_space.hpp"

#include <cmath>

#include "tpx/kernels.hpp"

namespace tpx {

TupleSpace::TupleSpace(std::int64_t local_dim, int copies) : n_(local_dim), copies_(copies) {
    if (n_ < 2) throw ArgumentError("TupleSpace: local dimension must be >= 2");
    if (copies_ < 1) throw ArgumentError("TupleSpace: copies must be >= 1");
    int128 d = pow_int128(n_, copies_);
    if (d > kMaxEncodedDim)
        throw SizeLimitError("TupleSpace: N^copies exceeds the 2^48 index guard");
    dim_ = std::int64_t(d);
}

StateVector::StateVector(const TupleSpace& s) : space(s) {
    if (s.dim() > kMaxDenseVectorDim)
        throw SizeLimitError("StateVector: dimension too large for dense storage");
    amp.assign(size_t(s.dim()), cplx(0.0, 0.0));
}

double StateVector::norm() const { return kernels::norm2(amp); }

void StateVector::normalize() {
    double nrm = norm();
    if (nrm == 0.0) throw ArgumentError("StateVector::normalize: zero vector");
    kernels::scale(amp, 1.0 / nrm);
}

SetPartition equality_pattern(std::span<const int> tuple) {
    std::vector<int> ids(tuple.size());
    equality_pattern_ids(tuple, ids);
    return SetPartition::from_block_ids(int(tuple.size()), ids);
}

void equality_pattern_ids(std::span<const int> tuple, std::span<int> ids) {
    int c = int(tuple.size());
    int next = 0;
    for (int i = 0; i < c; ++i) {
        int id = next;
        for (int j = 0; j < i; ++j) {
            if (tuple[size_t(j)] == tuple[size_t(i)]) {
                id = ids[size_t(j)];
                break;
            }
        }
        if (id == next) ++next;
        ids[size_t(i)] = id;
    }
}

int128 class_size_I(const SetPartition& p, std::int64_t n) {
    return falling_factorial(n, p.block_count());
}

int128 class_size_E(const SetPartition& p, std::int64_t n) {
    return pow_int128(n, p.block_count());
}

namespace {

StateVector build_class_state(const SetPartition& p, const TupleSpace& space, bool exact_pattern) {
    if (p.ground_size() != space.copies())
        throw ArgumentError("build_state: partition ground size must equal copies");
    StateVector state(space);
    std::vector<int> tuple(size_t(space.copies()));
    std::vector<int> want = p.block_ids();
    std::vector<int> ids(size_t(space.copies()));
    std::int64_t members = 0;
    for (std::int64_t t = 0; t < space.dim(); ++t) {
        space.decode(t, tuple);
        bool in_class;
        if (exact_pattern) {
            equality_pattern_ids(tuple, ids);
            in_class = std::equal(ids.begin(), ids.end(), want.begin());
        } else {
            in_class = true;
            for (const auto& block : p.blocks()) {
                int v = tuple[size_t(block.front() - 1)];
                for (int e : block) in_class = in_class && tuple[size_t(e - 1)] == v;
            }
        }
        if (in_class) {
            state.amp[size_t(t)] = cplx(1.0, 0.0);
            ++members;
        }
    }
    if (members == 0) throw DegenerateClassError("build_state: empty class (N too small)");
    double inv = 1.0 / std::sqrt(double(members));
    kernels::scale(state.amp, inv);
    return state;
}

} // namespace

StateVector build_state_I(const SetPartition& p, const TupleSpace& space) {
    return build_class_state(p, space, true);
}

StateVector build_state_E(const SetPartition& p, const TupleSpace& space) {
    return build_class_state(p, space, false);
}

std::vector<IECoefficient> i_in_e_coeffs(const SetPartition& p, std::int64_t n) {
    if (n < p.ground_size())
        throw RegimeError("i_in_e_coeffs: requires N >= ground size");
    int128 i_size = class_size_I(p, n);
    std::vector<IECoefficient> out;
    for (SetPartition& coarse : coarsenings(p)) {
        std::int64_t mu = mobius_closed_form(p, coarse);
        int128 e_size = class_size_E(coarse, n);
        double value = double(mu) * std::sqrt(double(e_size) / double(i_size));
        out.push_back({std::move(coarse), mu, e_size, i_size, value});
    }
    return out;
}

} // namespace tpx
