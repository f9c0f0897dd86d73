#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "rnt/hash.hpp"

namespace rnt {

using Rng = std::mt19937_64;

// Every stochastic stage draws from its own stream:
//   stage_seed = mix64(root ^ fnv1a64(stage))
// so any stage can be re-run in isolation from the root seed alone.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::string_view stage) {
  return mix64(root ^ fnv1a64(stage));
}

inline Rng make_rng(std::uint64_t root, std::string_view stage) {
  return Rng(derive_seed(root, stage));
}

}  // namespace rnt
