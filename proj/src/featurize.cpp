#include "rnt/featurize.hpp"

#include <algorithm>
#include <cmath>

#include "rnt/common.hpp"
#include "rnt/hash.hpp"

namespace rnt {

double SparseVector::norm() const {
  double s = 0.0;
  for (const auto& [_, w] : entries) s += w * w;
  return std::sqrt(s);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    const bool alnum = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
                       (c >= 'A' && c <= 'Z') || c >= 0x80;
    if (alnum) {
      cur.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : ch);
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

SparseVector vectorize(const std::vector<std::string>& tokens, const VectorizerConfig& config) {
  if (config.n_max < 1) throw InvalidArgument("vectorize: n_max must be >= 1");
  if (config.buckets_log2 < 10 || config.buckets_log2 > 30)
    throw InvalidArgument("vectorize: buckets_log2 must lie in [10, 30]");
  const int shift = 64 - config.buckets_log2;
  std::vector<std::uint32_t> buckets;
  std::string key;
  for (int n = 1; n <= config.n_max; ++n) {
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
      key.clear();
      for (int k = 0; k < n; ++k) {
        if (k > 0) key.push_back('\x1f');
        key += tokens[i + static_cast<std::size_t>(k)];
      }
      buckets.push_back(static_cast<std::uint32_t>(feature_hash(key, config.hash_seed) >> shift));
    }
  }
  std::sort(buckets.begin(), buckets.end());
  SparseVector v;
  for (std::size_t i = 0; i < buckets.size();) {
    std::size_t j = i;
    while (j < buckets.size() && buckets[j] == buckets[i]) ++j;
    v.entries.emplace_back(buckets[i], static_cast<double>(j - i));
    i = j;
  }
  const double norm = v.norm();
  if (norm > 0.0)
    for (auto& [_, w] : v.entries) w /= norm;
  return v;
}

}  // namespace rnt
