#pragma once

// deterministic prng for sampling point configurations and property tests.
// splitmix64: tiny, well understood, identical output on every platform.

#include <cstdint>

#include "surf/rational.hpp"

namespace surf {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform-ish integer in [lo, hi]; bias is irrelevant for our ranges.
    long range(long lo, long hi) {
        assert(hi >= lo);
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long>(next() % span);
    }

    // small rational with numerator in [-max_num, max_num] and
    // denominator in [1, max_den].
    Rat rational(long max_num, long max_den) {
        long n = range(-max_num, max_num);
        long d = range(1, max_den);
        return rat(n, d);
    }
};

}  // namespace surf
