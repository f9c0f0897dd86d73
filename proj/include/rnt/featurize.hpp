#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rnt {

// Sorted (bucket, weight) pairs; no zero weights stored.
struct SparseVector {
  std::vector<std::pair<std::uint32_t, double>> entries;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
  double norm() const;
  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

struct VectorizerConfig {
  int n_max = 2;
  int buckets_log2 = 18;
  std::uint64_t hash_seed = 0x5eed5eedULL;

  std::size_t num_buckets() const { return std::size_t{1} << buckets_log2; }
};

// Lowercases ASCII and splits on runs of non-alphanumeric bytes. Bytes >= 0x80
// count as alphanumeric so multi-byte UTF-8 letters stay inside their token.
std::vector<std::string> tokenize(std::string_view text);

// Term-frequency bag of word n-grams (n = 1..n_max), hashed into 2^B buckets
// and L2-normalized. An n-gram's key is its tokens joined by U+001F; the bucket
// is the top B bits of feature_hash(key, hash_seed).
SparseVector vectorize(const std::vector<std::string>& tokens, const VectorizerConfig& config);

inline SparseVector featurize(std::string_view text, const VectorizerConfig& config) {
  return vectorize(tokenize(text), config);
}

}  // namespace rnt
