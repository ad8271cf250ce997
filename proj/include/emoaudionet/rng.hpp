#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace emoaudionet {

// All randomness in the toolkit flows through these helpers so that two runs
// with the same seeds are bit-identical. std::uniform_real_distribution is
// implementation-defined; the mappings below are not.

/// Uniform double in [0, 1) from the top 53 bits of the generator.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [-1, 1).
inline double uniform_pm1(std::mt19937_64& rng) {
    return 2.0 * uniform01(rng) - 1.0;
}

/// Uniform integer in [0, n). n must be > 0.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    return rng() % n;
}

/// FNV-1a over arbitrary bytes; used to derive sub-seeds and cache keys.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t fnv1a64_u64(std::uint64_t v, std::uint64_t h) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xff;
        h *= 0x100000001b3ull;
    }
    return h;
}

/// Deterministic sub-seed from a base seed plus a textual path and an index.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag, std::uint64_t index = 0) {
    std::uint64_t h = fnv1a64(tag);
    h = fnv1a64_u64(base, h);
    h = fnv1a64_u64(index, h);
    return h;
}

}  // namespace emoaudionet
