#pragma once

#include <cstdint>
#include <random>

namespace kts {

using Rng = std::mt19937_64;

// Derives an independent stream seed from (seed, stream) with a SplitMix64
// finalizer. Parallel code seeds one Rng per work item this way so results
// do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  return Rng(derive_seed(seed, stream));
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream) {
  return Rng(derive_seed(derive_seed(seed, stream), substream));
}

}  // namespace kts
