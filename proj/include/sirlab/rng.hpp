#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace sirlab {

// Deterministic stream RNG: xoshiro256++ seeded from (master_seed, stream_id)
// through splitmix64. The same pair always yields the same draw sequence, on
// any platform; distinct stream ids give decorrelated streams, so parallel
// replications can draw independently without sharing state.
class Rng {
  public:
    Rng(std::uint64_t master_seed, std::uint64_t stream_id) {
        std::uint64_t x = master_seed ^ (0x9E3779B97F4A7C15ULL * (stream_id + 1));
        for (auto& word : state_) word = splitmix64(x);
        // all-zero state is invalid for xoshiro
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Standard normal via the Marsaglia polar method; the spare deviate is
    // cached so consecutive calls alternate cheap/expensive.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// FNV-1a over a label plus integer parameters; used to derive one stream id
// per (experiment, grid cell, replication) so results do not depend on
// scheduling order.
inline std::uint64_t stream_hash(std::string_view label, std::uint64_t a = 0,
                                 std::uint64_t b = 0, std::uint64_t c = 0,
                                 std::uint64_t d = 0) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xFF;
            h *= 0x100000001B3ULL;
        }
    };
    for (unsigned char ch : label) {
        h ^= ch;
        h *= 0x100000001B3ULL;
    }
    mix(a);
    mix(b);
    mix(c);
    mix(d);
    return h;
}

}  // namespace sirlab
