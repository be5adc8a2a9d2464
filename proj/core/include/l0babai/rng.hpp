#pragma once

#include <cstdint>
#include <random>

namespace l0babai {

/// Seedable 64-bit generator with derived substreams.
///
/// A substream Rng(seed, block) is decorrelated from every other block of the
/// same seed, so work split into blocks reproduces bit-identically no matter
/// how blocks are scheduled. Gaussians use the polar method; the output
/// sequence is fixed by this class, not by the standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : Rng(seed, 0) {}

    Rng(std::uint64_t seed, std::uint64_t block);

    /// Raw 64 bits.
    std::uint64_t bits() { return eng_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

    /// Standard normal via the polar method (pairs are cached).
    double gaussian();

    /// Uniform integer in [0, n).
    int uniform_int(int n) { return static_cast<int>(uniform() * n); }

private:
    std::mt19937_64 eng_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace l0babai
