#ifndef TPX_TUPLE_SPACE_HPP
#define TPX_TUPLE_SPACE_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "tpx/errors.hpp"
#include "tpx/numeric.hpp"
#include "tpx/partition.hpp"

namespace tpx {

using cplx = std::complex<double>;

// Index space [N]^copies with big-endian radix-N packing: the first tuple
// entry is the most significant digit. Values are 0-based.
class TupleSpace {
public:
    TupleSpace(std::int64_t local_dim, int copies);

    std::int64_t local_dim() const { return n_; }
    int copies() const { return copies_; }
    std::int64_t dim() const { return dim_; }

    std::int64_t encode(std::span<const int> tuple) const {
        std::int64_t idx = 0;
        for (int v : tuple) idx = idx * n_ + v;
        return idx;
    }

    void decode(std::int64_t idx, std::span<int> tuple) const {
        for (int f = copies_ - 1; f >= 0; --f) {
            tuple[size_t(f)] = int(idx % n_);
            idx /= n_;
        }
    }

    bool operator==(const TupleSpace& o) const { return n_ == o.n_ && copies_ == o.copies_; }

private:
    std::int64_t n_;
    int copies_;
    std::int64_t dim_;
};

// Dense complex vector over a TupleSpace.
struct StateVector {
    TupleSpace space;
    std::vector<cplx> amp;

    explicit StateVector(const TupleSpace& s);

    double norm() const;
    void normalize();
};

// Equality pattern of a value tuple: positions i,j share a block iff the
// values agree. Positions are 1-based in the resulting partition.
SetPartition equality_pattern(std::span<const int> tuple);

// Same, but producing the canonical first-occurrence block labelling
// directly (hot path; avoids building block vectors).
void equality_pattern_ids(std::span<const int> tuple, std::span<int> ids);

// |I_p| = (N)_{|p|}; 0 when N < |p|.
int128 class_size_I(const SetPartition& p, std::int64_t n);
// |E_p| = N^{|p|}.
int128 class_size_E(const SetPartition& p, std::int64_t n);

// Unit vectors with uniform amplitude on a class and zero elsewhere.
StateVector build_state_I(const SetPartition& p, const TupleSpace& space);
StateVector build_state_E(const SetPartition& p, const TupleSpace& space);

// One coefficient of the expansion |I_p> = sum mu(p,p') sqrt(|E_p'|/|I_p|) |E_p'>.
struct IECoefficient {
    SetPartition coarse;        // p' >= p
    std::int64_t mu;            // exact Mobius factor
    int128 e_size;              // N^{|p'|}, exact radicand numerator
    int128 i_size;              // (N)_{|p|}, exact radicand denominator
    double value;               // mu * sqrt(e_size / i_size)
};

// Requires N >= ground size (the polynomial identities assume it).
std::vector<IECoefficient> i_in_e_coeffs(const SetPartition& p, std::int64_t n);

} // namespace tpx

#endif
