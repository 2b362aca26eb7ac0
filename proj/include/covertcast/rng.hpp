#pragma once

#include <cstdint>

namespace covertcast {

// splitmix64 finalizer; full avalanche on 64 bits.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Keyed stream derivation. Every parallel unit of work (trial, sample,
// codeword) owns a stream keyed by its logical coordinates, so results are
// independent of execution order and thread count.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a,
                                   std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t x = mix64(seed);
    x = mix64(x ^ mix64(a ^ 0xA0761D6478BD642FULL));
    x = mix64(x ^ mix64(b ^ 0xE7037ED1A0B428DBULL));
    x = mix64(x ^ mix64(c ^ 0x8EBC6AF09C88C6E3ULL));
    return x;
}

// xoshiro256++ seeded from a 64-bit key via splitmix64.
class Rng {
public:
    explicit Rng(std::uint64_t key) {
        std::uint64_t x = key;
        for (auto& w : s_) {
            x += 0x9E3779B97F4A7C15ULL;
            w = mix64(x);
        }
        s_[0] |= 1;  // never the all-zero state
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

    // Uniform double in [0,1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound); Lemire multiply-shift.
    std::uint32_t next_below(std::uint32_t bound) {
        return static_cast<std::uint32_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

// Stream tags; keep values stable, they feed the derivation above.
namespace stream_tag {
inline constexpr std::uint64_t innocent = 0x11;
inline constexpr std::uint64_t covert = 0x12;
inline constexpr std::uint64_t codebook = 0x13;
inline constexpr std::uint64_t trial = 0x21;
inline constexpr std::uint64_t lrt_h0 = 0x31;
inline constexpr std::uint64_t lrt_h1 = 0x32;
inline constexpr std::uint64_t kl_sample = 0x33;
inline constexpr std::uint64_t detect = 0x34;
}  // namespace stream_tag

}  // namespace covertcast
