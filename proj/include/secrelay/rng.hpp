#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace secrelay {

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Stateless mix of a key tuple into one 64-bit value.
inline constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
    std::uint64_t s = seed;
    std::uint64_t k = splitmix64(s);
    s = k ^ (tag * 0xD6E8FEB86659FD93ULL);
    k = splitmix64(s);
    s = k ^ index;
    return splitmix64(s);
}

/// xoshiro256++ keyed by (seed, tag, index). Every Monte Carlo trial owns one
/// stream, so results do not depend on how trials are scheduled.
class TrialRng {
public:
    using result_type = std::uint64_t;

    explicit TrialRng(std::uint64_t seed, std::uint64_t tag = 0, std::uint64_t index = 0) {
        std::uint64_t s = derive_key(seed, tag, index);
        for (auto& word : state_) word = splitmix64(s);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
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

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Unit-mean exponential (Rayleigh fading power gain).
    double exponential() { return -std::log1p(-uniform()); }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4]{};
};

}  // namespace secrelay
