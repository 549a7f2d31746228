#ifndef MMID_RNG_HPP
#define MMID_RNG_HPP

#include <cmath>
#include <cstdint>
#include <cstddef>
#include <string_view>

namespace mmid {

// xoshiro256** stream seeded through splitmix64. All randomness in the
// library flows from one 64-bit root seed through named substreams so a
// component's draws do not depend on what ran before it. std::mt19937 with
// library distributions is avoided on purpose: distribution output is
// implementation-defined and would break byte-reproducible CLI runs.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto &word : state_) word = splitmix64(x);
    }

    // Substream keyed by (label, index). Streams derived from distinct keys
    // are independent for practical purposes.
    Rng derive(std::string_view label, std::uint64_t index = 0) const {
        std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a over the label
        for (char c : label) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ull;
        }
        std::uint64_t x = state_[0];
        std::uint64_t mixed = splitmix64(x) ^ h;
        mixed = splitmix_mix(mixed + 0x9e3779b97f4a7c15ull * (index + 1));
        return Rng(mixed);
    }

    std::uint64_t next_u64() {
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

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). Rejection-free modulo bias is negligible for
    // the small n used here, but use Lemire reduction anyway.
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n == 0) return 0;
        while (true) {
            const std::uint64_t x = next_u64();
            const unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
            const std::uint64_t lo = static_cast<std::uint64_t>(m);
            if (lo >= n || lo >= (0ull - n) % n) return static_cast<std::uint64_t>(m >> 64);
        }
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Box-Muller (no cached spare; keeps the stream
    // position a pure function of the draw count).
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t splitmix_mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    static std::uint64_t splitmix64(std::uint64_t &x) {
        x += 0x9e3779b97f4a7c15ull;
        return splitmix_mix(x);
    }

    std::uint64_t state_[4];
};

}  // namespace mmid

#endif
