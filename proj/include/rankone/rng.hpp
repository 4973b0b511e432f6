#pragma once

#include <cmath>
#include <cstdint>

#include "rankone/types.hpp"

namespace rankone {

// SplitMix64: 64-bit-seeded counter-based generator (Steele/Lea/Flood).
// The state advances by a fixed Weyl increment and each output is a hash
// of the counter, so independent streams can be derived with split().
// Gaussians come from an explicit Box-Muller transform; no standard-library
// distribution is involved, so identical seeds give bit-identical samples.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1), 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (lo, hi] would break determinism conventions; callers that
    // need an open endpoint use 1 - uniform().
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal. Box-Muller produces pairs; the spare is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1], log is safe
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // x + iy with independent standard normal parts.
    Complex complex_normal() {
        const double re = normal();
        const double im = normal();
        return Complex(re, im);
    }

    // Derives an independent child stream (consumes one output).
    SplitMix64 split() { return SplitMix64(next_u64()); }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace rankone
