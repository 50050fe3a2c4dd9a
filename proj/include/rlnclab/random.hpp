#pragma once

#include <cstdint>

namespace rlnclab {

// Deterministic 64-bit random stream (xoshiro256**, seeded via SplitMix64).
//
// Streams are single-owner: never share one instance across workers. Parallel
// code derives one independent stream per trial with substream(), so results
// do not depend on scheduling or worker count. The same (seed, index) pair
// yields the same stream on every platform; nothing here depends on
// std::random_device or libstdc++ distribution internals.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = split_mix(x);
    }

    static RandomStream substream(std::uint64_t master_seed, std::uint64_t index) {
        std::uint64_t a = master_seed;
        std::uint64_t b = index + 0x9E3779B97F4A7C15ULL;
        return RandomStream(split_mix(a) ^ mix(b * 0xBF58476D1CE4E5B9ULL));
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Exactly uniform over [0, n) via rejection sampling; no modulo bias.
    std::uint64_t uniform_below(std::uint64_t n) {
        // 2^64 mod n; when n divides 2^64 every word is accepted.
        const std::uint64_t rem = (0xFFFFFFFFFFFFFFFFULL % n + 1) % n;
        std::uint64_t r = next();
        if (rem != 0) {
            const std::uint64_t limit = 0ULL - rem;  // 2^64 - rem
            while (r >= limit) r = next();
        }
        return r % n;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static constexpr std::uint64_t split_mix(std::uint64_t& x) {
        x += 0x9E3779B97F4A7C15ULL;
        return mix(x);
    }

    std::uint64_t state_[4];
};

}  // namespace rlnclab
