#pragma once

#include <cstdint>
#include <random>

namespace simbound {

/**
Seedable random generator with a stable cross-platform stream.

The engine is std::mt19937_64, whose output sequence is fully specified by
the C++ standard. The floating-point and bounded-integer mappings below are
implemented here rather than with std <random> distributions, whose output
is implementation-defined. Streams are derived from (seed, stream) with the
SplitMix64 finalizer, so independent streams can run in any order (or in
parallel) and still reproduce bit-identical results.
*/
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, std::uint64_t stream) : engine_(mix(seed, stream)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1), from the top 53 bits of the engine output.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n), unbiased via bitmask rejection.
    int uniform_int(int n) {
        const auto bound = static_cast<std::uint64_t>(n);
        std::uint64_t mask = ~std::uint64_t{0};
        mask >>= 63 - bit_width_minus_one(bound - 1);
        for (;;) {
            const std::uint64_t draw = next_u64() & mask;
            if (draw < bound) return static_cast<int>(draw);
        }
    }

    /// SplitMix64 finalizer over (seed, stream); used to seed sub-streams.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

  private:
    static int bit_width_minus_one(std::uint64_t v) {
        int w = 0;
        while (v > 1) {
            v >>= 1;
            ++w;
        }
        return w;
    }

    std::mt19937_64 engine_;
};

}  // namespace simbound
