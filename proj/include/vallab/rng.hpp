#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

namespace vallab {

// xoshiro256** seeded through splitmix64. The standard <random>
// distributions are implementation-defined, and suite reports must be
// byte-identical under a fixed seed, so the generator and the mapping to
// doubles are pinned here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed) {
        std::uint64_t x = seed;
        for (auto& s : state_) s = splitmix64(x);
    }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Deterministic per-stream seed derivation (per-trial sub-generators).
    static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
        std::uint64_t a = master;
        std::uint64_t b = stream ^ 0xD1B54A32D192ED03ULL;
        return splitmix64(a) ^ splitmix64(b);
    }

    Rng split(std::uint64_t stream) const { return Rng(derive_seed(seed_, stream)); }

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
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    // Unbiased uniform index in {0, ..., n-1}; n must be positive.
    std::size_t next_index(std::size_t n) {
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = ~0ULL - ~0ULL % bound;
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return static_cast<std::size_t>(x % bound);
    }

    bool next_bool() { return (next_u64() & 1ULL) != 0; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t seed_;
    std::uint64_t state_[4];
};

// k distinct indices from {0, ..., n-1}, returned sorted. Partial
// Fisher-Yates on a scratch vector; deterministic under the given Rng state.
std::vector<std::size_t> sample_indices(Rng& rng, std::size_t n, std::size_t k);

} // namespace vallab
