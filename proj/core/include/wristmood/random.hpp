#pragma once

#include <cstdint>
#include <random>

namespace wristmood {

/// Deterministic generator for (seed, stream); streams give independent
/// sub-seeds for repeats, days and folds.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace wristmood
