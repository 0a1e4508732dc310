#pragma once

#include <array>
#include <cstdint>

namespace solitonchain {

/// SplitMix64 step. Used to expand seeds and to derive substream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t &state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z               = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z               = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Tags for independent disorder streams of one realization.
enum class StreamTag : std::uint64_t {
    diagonal    = 0x6469616730303031ULL, // "diag0001"
    offdiagonal = 0x6f66666430303031ULL, // "offd0001"
};

/// Seed of the stream `tag` of realization `realization`. Depends only on its
/// three inputs, never on evaluation order.
constexpr std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t realization, StreamTag tag) {
    std::uint64_t s = base_seed;
    std::uint64_t h = splitmix64(s);
    s               = h ^ realization;
    h               = splitmix64(s);
    s               = h ^ static_cast<std::uint64_t>(tag);
    return splitmix64(s);
}

/// xoshiro256** 1.0 (Blackman & Vigna), state filled from SplitMix64.
class Xoshiro256 {
  public:
    explicit constexpr Xoshiro256(std::uint64_t seed) {
        for(auto &w : s_) w = splitmix64(seed);
    }

    constexpr std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t      = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on [0, 1) from the top 53 bits.
    constexpr double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on [-1/2, 1/2).
    constexpr double uniform_centered() { return uniform01() - 0.5; }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> s_{};
};

} // namespace solitonchain
