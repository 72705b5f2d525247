#ifndef ARCPARSE_RNG_H_
#define ARCPARSE_RNG_H_

#include <cstdint>
#include <random>

namespace arcparse {

using Rng = std::mt19937_64;

// Uniform draw in [0, 1) built from the top 53 bits of one engine output.
// Unlike std::uniform_real_distribution the result is identical across
// standard library implementations.
inline double UniformDraw(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform draw in [lo, hi).
inline double UniformDraw(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * UniformDraw(rng);
}

// Independent stream for (seed, stream) pairs, e.g. one per epoch.
inline Rng MakeRng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

}  // namespace arcparse

#endif  // ARCPARSE_RNG_H_
