#pragma once

#include <array>
#include <cstdint>

namespace sarw {

// Reproducibility contract: every simulation routine takes a 64-bit seed
// and a stream index and derives an independent generator from them, so
// trial t of a run is the same bit stream no matter how trials are
// scheduled.  Generators: SplitMix64 for seeding, xoshiro256** 1.0
// (Blackman/Vigna, public domain) for the draws.

struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

class Xoshiro256ss {
public:
    explicit Xoshiro256ss(std::uint64_t seed) {
        SplitMix64 sm{seed};
        for (auto& w : s_) w = sm.next();
    }

    /// Independent stream: mixes the index into the seed before expansion.
    static Xoshiro256ss stream(std::uint64_t master_seed, std::uint64_t stream_index) {
        SplitMix64 sm{master_seed ^ (0x9e3779b97f4a7c15ULL * (stream_index + 1))};
        Xoshiro256ss g(sm.next());
        return g;
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    static const char* name() { return "xoshiro256**"; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> s_;
};

} // namespace sarw
