#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace nof {

// mt19937_64 is fully specified by the standard, so seeded streams are
// identical across platforms.
using Rng = std::mt19937_64;

inline Rng seeded_rng(std::uint64_t seed) { return Rng{seed}; }

/// Unbiased draw from [0, bound) via rejection. std::uniform_int_distribution
/// is implementation-defined and must not be used where output bytes matter.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = (std::numeric_limits<std::uint64_t>::max() / bound) * bound;
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % bound;
}

}  // namespace nof
