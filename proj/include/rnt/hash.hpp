#pragma once

#include <cstdint>
#include <string_view>

namespace rnt {

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

// splitmix64 finalizer. Used to whiten hashes and to expand seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a 64 with the seed folded into the offset basis.
constexpr std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0) {
  std::uint64_t h = kFnvOffsetBasis ^ seed;
  for (char c : bytes) {
    h ^= static_cast<std::uint8_t>(c);
    h *= kFnvPrime;
  }
  return h;
}

// Feature hash used by the vectorizer: FNV-1a 64 (seeded), then mix64.
constexpr std::uint64_t feature_hash(std::string_view bytes, std::uint64_t seed) {
  return mix64(fnv1a64(bytes, seed));
}

}  // namespace rnt
