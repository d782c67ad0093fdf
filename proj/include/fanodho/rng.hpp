// rng.hpp — counter-based random numbers for reproducible ensembles.
// Draws are keyed by (seed, sample, slot), so every sample can be generated
// independently in any order on any number of threads and still reproduce
// bit-identically.

#pragma once

#include <cmath>
#include <cstdint>

namespace fanodho {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace detail

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    // uniform in (0, 1); never returns 0 so Box-Muller's log is safe
    double uniform(std::uint64_t sample, std::uint64_t slot) const {
        std::uint64_t h = detail::splitmix64(seed_ ^ detail::splitmix64(sample));
        h = detail::splitmix64(h ^ slot);
        return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
    }

    // standard normal via Box-Muller on two keyed uniforms
    double normal(std::uint64_t sample, std::uint64_t slot) const {
        const double u1 = uniform(sample, 2 * slot);
        const double u2 = uniform(sample, 2 * slot + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

} // namespace fanodho
