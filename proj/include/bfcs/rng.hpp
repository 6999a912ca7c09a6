#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bfcs {

// All randomness in the library flows through mt19937_64 plus the hand
// written samplers below. The standard pins the mt19937_64 stream, while
// std::*_distribution output is implementation-defined, so a published
// seed reproduces the same data on every platform that rounds libm the
// same way.
using Rng = std::mt19937_64;

// splitmix64 finalizer; scrambles seed material.
inline constexpr std::uint64_t mix_bits(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent stream for task `stream` of a run seeded with `master`.
// Parallel and serial schedules draw from the same per-task streams, so
// results do not depend on the degree of parallelism.
inline Rng derive_rng(std::uint64_t master, std::uint64_t stream) {
    return Rng(mix_bits(mix_bits(master) ^ mix_bits(stream + 0x517cc1b727220a95ULL)));
}

// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Uniform index in [0, bound); rejection keeps it exactly uniform.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % bound;
}

// Standard normal via Box-Muller, cosine branch. Consumes exactly two
// words per call; u1 lies in (0, 1] so the log never overflows.
inline double standard_normal(Rng& rng) {
    const double u1 = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

inline double bernoulli01(Rng& rng, double p) {
    return uniform01(rng) < p ? 1.0 : 0.0;
}

}  // namespace bfcs
