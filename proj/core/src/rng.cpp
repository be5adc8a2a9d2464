#include "l0babai/rng.hpp"

#include <cmath>

namespace l0babai {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t block) {
    // Two mixing rounds decorrelate (seed, block) pairs before seeding.
    std::uint64_t state = seed ^ (0x632BE59BD9B4E019ULL * (block + 1));
    std::uint64_t s0 = splitmix64(state);
    std::uint64_t s1 = splitmix64(state);
    eng_.seed(s0 ^ (s1 << 1));
}

double Rng::gaussian() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    double x, y, s;
    do {
        x = 2.0 * uniform() - 1.0;
        y = 2.0 * uniform() - 1.0;
        s = x * x + y * y;
    } while (s >= 1.0 || s == 0.0);
    double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = y * f;
    has_cached_ = true;
    return x * f;
}

} // namespace l0babai
