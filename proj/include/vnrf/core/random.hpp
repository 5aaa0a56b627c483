#ifndef VNRF_CORE_RANDOM_HPP
#define VNRF_CORE_RANDOM_HPP

// Seeded 64-bit generators. A (seed, stream) pair names an independent
// stream; replicates use stream = replicate index.

#include <cstdint>
#include <random>

namespace vnrf
{

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x564e5246u};
    return Rng(seq);
}

/// Uniform double in [0, 1).
inline double uniform01(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform index in [0, n) by multiply-shift; independent of the standard library's distributions.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n)
{
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

} // namespace vnrf

#endif
