// Deterministic, platform-independent randomness. Streams are derived from a
// 64-bit key; forking with a tag (e.g. (seed, epoch) for the per-epoch shuffle)
// gives independent counter-based streams, so results never depend on call
// order elsewhere in the program.
#pragma once

#include <cstdint>
#include <vector>

namespace bumplab {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_key(std::uint64_t key, std::uint64_t tag) {
    // One splitmix round over the xor keeps forked streams decorrelated.
    std::uint64_t s = key ^ (0x9E3779B97F4A7C15ull + tag * 0xD1B54A32D192ED03ull);
    splitmix64(s);
    return s;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // Burn one round so seed 0 and seed-adjacent streams differ early.
        splitmix64(state_);
    }

    Rng fork(std::uint64_t tag) const { return Rng(mix_key(state_, tag)); }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // Uniform in [0, 1) with 53 random bits; exact same value on every platform.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). n must be positive.
    std::int64_t below(std::int64_t n) {
        // Multiply-shift; bias is < 2^-64 per draw, irrelevant at our scales
        // and, unlike rejection, branch-free and reproducible.
        return static_cast<std::int64_t>(
            (static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n)) >> 64);
    }

    template <class V>
    void shuffle(std::vector<V>& v) {
        for (std::int64_t i = static_cast<std::int64_t>(v.size()) - 1; i > 0; --i) {
            std::int64_t j = below(i + 1);
            std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
        }
    }

private:
    std::uint64_t state_;
};

}  // namespace bumplab
