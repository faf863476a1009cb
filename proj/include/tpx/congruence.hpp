#ifndef TPX_CONGRUENCE_HPP
#define TPX_CONGRUENCE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "tpx/numeric.hpp"
#include "tpx/partition.hpp"

namespace tpx {

// Integer coefficient matrix of the signed bilinear form m.n restricted to
// an index class. The full form (rows = blocks of p1, cols = 2k) has
// entries in {0,1,-1}; the reduced form (cols = blocks of p2) has entries
// bounded by 2k in absolute value.
struct SignedConstraintMatrix {
    std::int64_t rows = 0, cols = 0;
    std::vector<std::int64_t> a;

    std::int64_t& at(std::int64_t i, std::int64_t j) { return a[size_t(i * cols + j)]; }
    std::int64_t at(std::int64_t i, std::int64_t j) const { return a[size_t(i * cols + j)]; }
};

// m.n = sum_{j<=k} m_j n_j - sum_{j>k} m_j n_j (indices 1-based in the
// formula; spans are 0-based of length 2k).
std::int64_t signed_dot(std::span<const int> m, std::span<const int> n, int k);

// Full |p1| x 2k matrix with row i carrying +1 on positions <= k of block i
// and -1 on positions > k.
SignedConstraintMatrix constraint_matrix(const SetPartition& p1, int k);

// Reduced |p1| x |p2| matrix: column j sums the full matrix over block j
// of p2.
SignedConstraintMatrix reduced_constraint_matrix(const SetPartition& p1, const SetPartition& p2,
                                                 int k);

// Solution count of A~ x == 0 (mod N) over free tuples x in [N]^{|p2|} in
// factored form: count = N^{free_exponent} * prod(gcd_factors).
struct SolutionCount {
    std::vector<std::int64_t> gcd_factors;
    int free_exponent = 0;

    int128 exact(std::int64_t n) const;
    double as_double(std::int64_t n) const;
};

// Brute-force count over all N^{cols} free tuples; guarded to <= 1e7.
int128 count_congruence_bruteforce(const SignedConstraintMatrix& reduced, std::int64_t n);

// Smith-normal-form count: diagonalize over Z, then each nonzero
// elementary divisor d contributes gcd(|d|, N) solutions and each free
// variable contributes N. The factored form is independent of N.
SolutionCount count_congruence_snf(const SignedConstraintMatrix& reduced);

// Chooses a backend. `a` may be the full (cols == 2k) matrix, which is
// first reduced against p2, or an already-reduced matrix.
int128 count_congruence_solutions(const SignedConstraintMatrix& a, const SetPartition& p2,
                                  std::int64_t n);

} // namespace tpx

#endif
