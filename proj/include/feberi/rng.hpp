// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT
//
// Counter-based pseudo-random generator ("SplitMix64 counter mode"):
// output(k) = finalize(key + k·φ64), where finalize is the SplitMix64
// avalanche function, φ64 = 0x9E3779B97F4A7C15 and key is derived from the
// user seed and a stream index. Every (seed, stream) pair is an independent,
// reproducible substream; draws depend only on (seed, stream, counter), never
// on global state, wall clock, or call interleaving — which is what makes
// ensemble runs deterministic regardless of execution order.

#pragma once

#include <cstdint>

namespace feberi::rng {

/// SplitMix64 avalanche finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

class CounterRng {
public:
    /// stream selects an independent substream of the same seed (e.g. the
    /// electron index within a train, or the ensemble-member index).
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix64(mix64(seed) ^ (0x9E3779B97F4A7C15ull * (stream + 1)))) {}

    std::uint64_t next_u64() {
        return mix64(key_ + 0x9E3779B97F4A7C15ull * counter_++);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [a, b).
    double uniform(double a, double b) { return a + (b - a) * next_double(); }

    /// Unbiased uniform integer in [0, bound); bound > 0.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t reject_below = (~bound + 1) % bound; // 2^64 mod bound
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= reject_below) return r % bound;
        }
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace feberi::rng
