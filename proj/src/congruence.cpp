#include "tpx/congruence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tpx {

std::int64_t signed_dot(std::span<const int> m, std::span<const int> n, int k) {
    if (m.size() != n.size() || int(m.size()) != 2 * k)
        throw ArgumentError("signed_dot: tuples must both have length 2k");
    std::int64_t acc = 0;
    for (int j = 0; j < k; ++j) acc += std::int64_t(m[size_t(j)]) * n[size_t(j)];
    for (int j = k; j < 2 * k; ++j) acc -= std::int64_t(m[size_t(j)]) * n[size_t(j)];
    return acc;
}

SignedConstraintMatrix constraint_matrix(const SetPartition& p1, int k) {
    if (p1.ground_size() != 2 * k)
        throw ArgumentError("constraint_matrix: partition must cover {1..2k}");
    std::int64_t rows = p1.block_count();
    SignedConstraintMatrix m{rows, 2 * k, std::vector<std::int64_t>(size_t(rows * 2 * k), 0)};
    const auto& blocks = p1.blocks();
    for (std::int64_t i = 0; i < rows; ++i)
        for (int e : blocks[size_t(i)]) m.at(i, e - 1) = (e <= k) ? 1 : -1;
    return m;
}

SignedConstraintMatrix reduced_constraint_matrix(const SetPartition& p1, const SetPartition& p2,
                                                 int k) {
    SignedConstraintMatrix full = constraint_matrix(p1, k);
    if (p2.ground_size() != 2 * k)
        throw ArgumentError("reduced_constraint_matrix: partition must cover {1..2k}");
    std::int64_t rows = full.rows, cols = p2.block_count();
    SignedConstraintMatrix red{rows, cols, std::vector<std::int64_t>(size_t(rows * cols), 0)};
    std::vector<int> col_of = p2.block_ids();
    for (std::int64_t i = 0; i < rows; ++i)
        for (std::int64_t j = 0; j < full.cols; ++j)
            red.at(i, col_of[size_t(j)]) += full.at(i, j);
    return red;
}

int128 SolutionCount::exact(std::int64_t n) const {
    int128 c = pow_int128(n, free_exponent);
    for (std::int64_t g : gcd_factors) {
        int128 next = c * std::gcd(g, n);
        if (c != 0 && next / c != std::gcd(g, n))
            throw SizeLimitError("SolutionCount: int128 overflow");
        c = next;
    }
    return c;
}

double SolutionCount::as_double(std::int64_t n) const {
    double c = std::pow(double(n), double(free_exponent));
    for (std::int64_t g : gcd_factors) c *= double(std::gcd(g, n));
    return c;
}

int128 count_congruence_bruteforce(const SignedConstraintMatrix& reduced, std::int64_t n) {
    double total = std::pow(double(n), double(reduced.cols));
    if (total > 1e7)
        throw SizeLimitError("count_congruence_bruteforce: N^{cols} exceeds 1e7");
    std::vector<std::int64_t> x(size_t(reduced.cols), 0);
    int128 count = 0;
    while (true) {
        bool ok = true;
        for (std::int64_t i = 0; ok && i < reduced.rows; ++i) {
            std::int64_t acc = 0;
            for (std::int64_t j = 0; j < reduced.cols; ++j) acc += reduced.at(i, j) * x[size_t(j)];
            ok = (acc % n + n) % n == 0;
        }
        if (ok) ++count;
        std::int64_t d = reduced.cols - 1;
        for (; d >= 0; --d) {
            if (++x[size_t(d)] < n) break;
            x[size_t(d)] = 0;
        }
        if (d < 0) break;
    }
    return count;
}

namespace {

// In-place Smith normal form over Z; only the diagonal is needed. Entries
// stay tiny for the <= 2k x 2k matrices produced here, but intermediate
// growth is checked anyway.
std::vector<std::int64_t> snf_diagonal(SignedConstraintMatrix m) {
    auto rows = m.rows, cols = m.cols;
    std::vector<std::int64_t> diag;
    std::int64_t t = 0;
    constexpr std::int64_t kGrowthGuard = std::int64_t(1) << 60;
    while (t < rows && t < cols) {
        // locate a pivot of minimal absolute value
        std::int64_t pi = -1, pj = -1, best = 0;
        for (std::int64_t i = t; i < rows; ++i)
            for (std::int64_t j = t; j < cols; ++j) {
                std::int64_t v = std::abs(m.at(i, j));
                if (v != 0 && (best == 0 || v < best)) {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break; // rest of the matrix is zero
        for (std::int64_t j = 0; j < cols; ++j) std::swap(m.at(t, j), m.at(pi, j));
        for (std::int64_t i = 0; i < rows; ++i) std::swap(m.at(i, t), m.at(i, pj));

        bool clean = true;
        for (std::int64_t i = t + 1; i < rows; ++i) {
            std::int64_t q = m.at(i, t) / m.at(t, t);
            if (q != 0)
                for (std::int64_t j = t; j < cols; ++j) {
                    m.at(i, j) -= q * m.at(t, j);
                    if (std::abs(m.at(i, j)) > kGrowthGuard)
                        throw SizeLimitError("snf_diagonal: entry growth guard");
                }
            if (m.at(i, t) != 0) clean = false;
        }
        for (std::int64_t j = t + 1; j < cols; ++j) {
            std::int64_t q = m.at(t, j) / m.at(t, t);
            if (q != 0)
                for (std::int64_t i = t; i < rows; ++i) {
                    m.at(i, j) -= q * m.at(i, t);
                    if (std::abs(m.at(i, j)) > kGrowthGuard)
                        throw SizeLimitError("snf_diagonal: entry growth guard");
                }
            if (m.at(t, j) != 0) clean = false;
        }
        if (!clean) continue; // remainders left; pick a smaller pivot next pass
        diag.push_back(std::abs(m.at(t, t)));
        ++t;
    }
    return diag;
}

} // namespace

SolutionCount count_congruence_snf(const SignedConstraintMatrix& reduced) {
    std::vector<std::int64_t> diag = snf_diagonal(reduced);
    SolutionCount out;
    out.gcd_factors = std::move(diag);
    out.free_exponent = int(reduced.cols - std::int64_t(out.gcd_factors.size()));
    return out;
}

int128 count_congruence_solutions(const SignedConstraintMatrix& a, const SetPartition& p2,
                                  std::int64_t n) {
    if (n < 2) throw ArgumentError("count_congruence_solutions: N must be >= 2");
    SignedConstraintMatrix reduced;
    if (a.cols == p2.block_count()) {
        reduced = a;
    } else if (a.cols == p2.ground_size()) {
        reduced = SignedConstraintMatrix{
            a.rows, p2.block_count(),
            std::vector<std::int64_t>(size_t(a.rows * p2.block_count()), 0)};
        std::vector<int> col_of = p2.block_ids();
        for (std::int64_t i = 0; i < a.rows; ++i)
            for (std::int64_t j = 0; j < a.cols; ++j)
                reduced.at(i, col_of[size_t(j)]) += a.at(i, j);
    } else {
        throw ArgumentError("count_congruence_solutions: matrix incompatible with p2");
    }
    if (std::pow(double(n), double(reduced.cols)) <= 1e7)
        return count_congruence_bruteforce(reduced, n);
    return count_congruence_snf(reduced).exact(n);
}

} // namespace tpx
