#pragma once

#include <cstdint>
#include <random>

namespace hpdwav {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Independent generator for one (seed, k1, k2, stream) tuple, so that cells
/// can be sampled in any order with identical results.
Rng cell_rng(std::uint64_t seed, std::uint64_t k1, std::uint64_t k2, std::uint64_t stream = 0);

}  // namespace hpdwav
