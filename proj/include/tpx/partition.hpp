#ifndef TPX_PARTITION_HPP
#define TPX_PARTITION_HPP

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/rational.hpp>

#include "tpx/errors.hpp"
#include "tpx/numeric.hpp"

namespace tpx {

// Partitions with more ground elements than this are refused everywhere.
inline constexpr int kMaxGroundSize = 12;
// zeta/mobius matrices are dense; beyond this Bell number they do not fit.
inline constexpr int kMaxMatrixGroundSize = 8;

// A set partition of {1..n}, stored canonically: each block ascending,
// blocks ordered by their minimum element.
class SetPartition {
public:
    SetPartition(int ground_size, std::vector<std::vector<int>> blocks);

    // Builds from a block-id labelling: ids[i] = block of element i+1.
    static SetPartition from_block_ids(int ground_size, std::span<const int> ids);
    static SetPartition bottom(int ground_size); // all singletons
    static SetPartition top(int ground_size);    // one block

    int ground_size() const { return n_; }
    int block_count() const { return int(blocks_.size()); }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }

    // Canonical block index of each element, 0-based array over elements 1..n.
    std::vector<int> block_ids() const;

    // "1,2|3|4": blocks joined by '|', elements by ','.
    std::string serialize() const;
    static SetPartition parse(const std::string& text);

    bool operator==(const SetPartition& other) const {
        return n_ == other.n_ && blocks_ == other.blocks_;
    }

private:
    int n_;
    std::vector<std::vector<int>> blocks_;
};

// All partitions of {1..n} in canonical order: lexicographic over the
// canonical serialization. Positions are stable across runs.
class PartitionIndex {
public:
    explicit PartitionIndex(int ground_size);

    int ground_size() const { return n_; }
    std::int64_t size() const { return std::int64_t(order_.size()); }
    const SetPartition& at(std::int64_t i) const { return order_[size_t(i)]; }
    const std::vector<SetPartition>& order() const { return order_; }

    std::int64_t position(const SetPartition& p) const;

    // Fast position lookup from a canonical block-id labelling (elements
    // 1..n mapped to first-occurrence block numbers). Hot path of the
    // class-average kernel.
    std::int64_t position_of_ids(std::span<const int> canonical_ids) const;

private:
    int n_;
    std::vector<SetPartition> order_;
    std::unordered_map<std::uint64_t, std::int64_t> by_key_;
};

PartitionIndex enumerate_partitions(int n);

bool is_refinement(const SetPartition& p1, const SetPartition& p2);
SetPartition meet(const SetPartition& p1, const SetPartition& p2);
SetPartition join(const SetPartition& p1, const SetPartition& p2);

// All partitions >= p (coarsenings), i.e. partitions of p's block set
// pushed back down to ground elements.
std::vector<SetPartition> coarsenings(const SetPartition& p);

struct IntMatrix {
    std::int64_t rows = 0, cols = 0;
    std::vector<std::int64_t> a;

    std::int64_t& at(std::int64_t i, std::int64_t j) { return a[size_t(i * cols + j)]; }
    std::int64_t at(std::int64_t i, std::int64_t j) const { return a[size_t(i * cols + j)]; }
};

// zeta(i,j) = 1 iff order[i] <= order[j].
IntMatrix zeta_matrix(const PartitionIndex& idx);
// Exact integer inverse of zeta, computed by back-substitution along a
// linear extension (block count descending), independent of the closed form.
IntMatrix mobius_matrix(const PartitionIndex& idx);

// mu(p1,p2) = (-1)^{|p1|-|p2|} prod_i (b_i - 1)! for p1 <= p2, else 0;
// b_i = number of p1-blocks inside block i of p2.
std::int64_t mobius_closed_form(const SetPartition& p1, const SetPartition& p2);

// sum_{p' >= p} |mu(p,p')| x^{|p'|}, by explicit summation.
boost::rational<std::int64_t> abs_mobius_sum(const SetPartition& p,
                                             const boost::rational<std::int64_t>& x);

// Rising factorial x(x+1)...(x+n-1) over rationals.
boost::rational<std::int64_t> rising_factorial(const boost::rational<std::int64_t>& x, int n);

// P(pi) = {{1, k+pi(1)}, ..., {k, k+pi(k)}}; image is 0-based (image[i] is
// the 0-based image of i+1).
SetPartition perm_partition(std::span<const int> image);

// All permutations of {0..k-1} in lexicographic order.
std::vector<std::vector<int>> all_permutations(int k);

} // namespace tpx

#endif
