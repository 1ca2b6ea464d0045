#pragma once

#include <cstdint>

namespace captionforge {

// SplitMix64 stream. Fully specified here so output is identical across
// platforms and standard-library versions, which the determinism contract
// depends on (std::uniform_*_distribution is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t state) : state_(state) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 mantissa bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n) via the multiply-shift reduction.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    bool bernoulli(double p) { return next_double() < p; }

private:
    std::uint64_t state_;
};

// The per-record stream depends only on (seed, record_id, epoch): each input
// is passed through the SplitMix64 finalizer and folded into the state, so
// processing order and thread scheduling cannot change any record's draws.
Rng derive_rng(std::uint64_t seed, std::int64_t record_id, std::uint64_t epoch);

}  // namespace captionforge
