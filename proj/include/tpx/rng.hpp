#ifndef TPX_RNG_HPP
#define TPX_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace tpx {

// Counter-based generator: every draw is a pure function of (seed, counter),
// so streams are reproducible independent of thread count or call order.
struct CounterRng {
    std::uint64_t seed = 0;

    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t bits(std::uint64_t counter) const {
        return splitmix64(splitmix64(seed) ^ splitmix64(counter + 0x632be59bd9b4e019ULL));
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform(std::uint64_t counter) const {
        return double(bits(counter) >> 11) * 0x1.0p-53;
    }

    // Standard complex Gaussian (unit variance per real component).
    std::complex<double> gaussian(std::uint64_t counter) const {
        double u1 = uniform(2 * counter);
        double u2 = uniform(2 * counter + 1);
        double r = std::sqrt(-2.0 * std::log1p(u1 - 1.0)); // log(1-u1), u1<1
        double t = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(t), r * std::sin(t)};
    }

    // Uniform integer in [0, bound) by rejection-free scaling (bound small).
    std::uint64_t below(std::uint64_t counter, std::uint64_t bound) const {
        return std::uint64_t(uniform(counter) * double(bound)) % bound;
    }

    CounterRng derive(std::uint64_t stream) const {
        return CounterRng{splitmix64(seed ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1))};
    }
};

} // namespace tpx

#endif
