#ifndef TPX_NUMERIC_HPP
#define TPX_NUMERIC_HPP

#include <cstdint>
#include <string>

#include "tpx/errors.hpp"

namespace tpx {

using int128 = __int128;

// Largest tensor dimension for which index arithmetic is supported.
inline constexpr std::int64_t kMaxEncodedDim = std::int64_t(1) << 48;
// Largest dimension for which dense complex vectors may be allocated.
inline constexpr std::int64_t kMaxDenseVectorDim = std::int64_t(1) << 26;
// Largest dimension for which dense complex matrices may be materialized.
inline constexpr std::int64_t kMaxDenseMatrixDim = 4096;

std::string int128_to_string(int128 v);

// (N)_n = N (N-1) ... (N-n+1); exact, n >= 0. Valid for any integer N.
int128 falling_factorial(std::int64_t n_base, int n_terms);

// x^(n) = x (x+1) ... (x+n-1); exact.
int128 rising_factorial_int(std::int64_t x, int n_terms);

// N^e exact with an overflow guard (throws SizeLimitError past ~1e38).
int128 pow_int128(std::int64_t base, int exp);

// n! as int64; n <= 20.
std::int64_t factorial(int n);

// Bell numbers B_0..B_n via the Bell triangle; n <= 25 (int64-exact).
std::int64_t bell_number(int n);

} // namespace tpx

#endif
