#include "tpx/numeric.hpp"

#include <array>
#include <vector>

namespace tpx {

std::string int128_to_string(int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : v;
    std::string digits;
    while (u > 0) {
        digits.push_back(char('0' + int(u % 10)));
        u /= 10;
    }
    if (neg) digits.push_back('-');
    return {digits.rbegin(), digits.rend()};
}

int128 falling_factorial(std::int64_t n_base, int n_terms) {
    if (n_terms < 0) throw ArgumentError("falling_factorial: negative length");
    int128 prod = 1;
    for (int i = 0; i < n_terms; ++i) {
        std::int64_t f = n_base - i;
        if (f == 0) return 0;
        int128 next = prod * f;
        if (prod != 0 && next / prod != f)
            throw SizeLimitError("falling_factorial: int128 overflow");
        prod = next;
    }
    return prod;
}

int128 rising_factorial_int(std::int64_t x, int n_terms) {
    if (n_terms < 0) throw ArgumentError("rising_factorial: negative length");
    int128 prod = 1;
    for (int i = 0; i < n_terms; ++i) {
        std::int64_t f = x + i;
        if (f == 0) return 0;
        int128 next = prod * f;
        if (prod != 0 && next / prod != f)
            throw SizeLimitError("rising_factorial: int128 overflow");
        prod = next;
    }
    return prod;
}

int128 pow_int128(std::int64_t base, int exp) {
    if (exp < 0) throw ArgumentError("pow_int128: negative exponent");
    int128 prod = 1;
    for (int i = 0; i < exp; ++i) {
        int128 next = prod * base;
        if (base != 0 && prod != 0 && next / prod != base)
            throw SizeLimitError("pow_int128: int128 overflow");
        prod = next;
    }
    return prod;
}

std::int64_t factorial(int n) {
    if (n < 0 || n > 20) throw ArgumentError("factorial: need 0 <= n <= 20");
    std::int64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

std::int64_t bell_number(int n) {
    if (n < 0 || n > 25) throw ArgumentError("bell_number: need 0 <= n <= 25");
    // Bell triangle: row r starts with the last entry of row r-1.
    std::vector<std::int64_t> row{1};
    std::int64_t bell = 1; // B_0
    for (int r = 1; r <= n; ++r) {
        std::vector<std::int64_t> next(r + 1);
        next[0] = row.back();
        for (int i = 0; i < r; ++i) next[i + 1] = next[i] + row[i];
        row = std::move(next);
        bell = row[0];
    }
    return bell;
}

} // namespace tpx
