#include "captionforge/rng.hpp"

namespace captionforge {

namespace {

std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

Rng derive_rng(std::uint64_t seed, std::int64_t record_id, std::uint64_t epoch) {
    std::uint64_t state = mix(seed + 0x9E3779B97F4A7C15ULL);
    state = mix(state ^ (static_cast<std::uint64_t>(record_id) + 0xD1B54A32D192ED03ULL));
    state = mix(state ^ (epoch + 0x8CB92BA72F3D8DD7ULL));
    return Rng(state);
}

}  // namespace captionforge
