#pragma once

#include <cstdint>

namespace gnnbench {

/// xorshift64* generator. All consumers of randomness in the engine
/// (weight init, synthetic graphs, test case generation) go through this
/// so that a seed reproduces identical bytes on every platform.
class XorShift64 {
public:
    explicit XorShift64(std::uint64_t seed) : state_(splitmix64(seed)) {
        if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;
    }

    /// Independent stream for a (seed, purpose) pair.
    static XorShift64 stream(std::uint64_t seed, std::uint64_t purpose) {
        return XorShift64(seed ^ (purpose * 0x9E3779B97F4A7C15ULL));
    }

    std::uint64_t next() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CDD1DULL;
    }

    /// Uniform in [0, 1). Uses 24 high bits so the value is exact in float.
    float next_float() {
        return static_cast<float>(next() >> 40) * (1.0f / 16777216.0f);
    }

    /// Uniform in [lo, hi).
    float next_float(float lo, float hi) {
        return lo + (hi - lo) * next_float();
    }

    /// Uniform integer in [0, bound). Multiply-shift map from the high
    /// 32 bits; bound must be >= 1.
    std::uint32_t next_below(std::uint32_t bound) {
        std::uint64_t hi = next() >> 32;
        return static_cast<std::uint32_t>((hi * bound) >> 32);
    }

private:
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    std::uint64_t state_;
};

/// 64-bit FNV-1a, used for cross-run bit-identity checks on result matrices.
inline std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed = 14695981039346656037ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace gnnbench
