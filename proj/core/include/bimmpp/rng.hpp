#pragma once

#include <cmath>
#include <cstdint>

namespace bimmpp {

// Seedable counter-style random stream: (seed, stream_id) fully determines
// the sequence, so parallel work units that own distinct stream ids produce
// results independent of scheduling. xoshiro256++ core, state filled by
// SplitMix64.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) {
        std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ULL * (stream_id + 1));
        for (auto& w : s_) {
            x += 0x9E3779B97F4A7C15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            w = z ^ (z >> 31);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on the open interval (0,1); never returns 0 or 1.
    double uniform() {
        return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

} // namespace bimmpp
