#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rnt/featurize.hpp"
#include "rnt/hash.hpp"

namespace rnt {
namespace {

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("Great movie!"), (std::vector<std::string>{"great", "movie"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(tokenize("A-B"), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(tokenize("  x1 -- y2z  "), (std::vector<std::string>{"x1", "y2z"}));
  EXPECT_EQ(tokenize("caf\xc3\xa9 ok"), (std::vector<std::string>{"caf\xc3\xa9", "ok"}));
}

TEST(Vectorize, SingleToken) {
  const auto v = vectorize({"a"}, {1, 18, 0x5eed5eedULL});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_DOUBLE_EQ(v.entries[0].second, 1.0);
}

TEST(Vectorize, BigramsNormalized) {
  const auto v = vectorize({"a", "b"}, {2, 18, 0x5eed5eedULL});
  ASSERT_EQ(v.size(), 3u);  // no collisions among a, b, a␟b at B=18
  for (const auto& [_, w] : v.entries) EXPECT_NEAR(w, 1.0 / std::sqrt(3.0), 1e-15);
}

TEST(Vectorize, EmptyInput) { EXPECT_TRUE(vectorize({}, {}).empty()); }

TEST(Vectorize, BucketsFromDocumentedHash) {
  const VectorizerConfig cfg{2, 12, 77};
  const auto v = vectorize({"x", "y"}, cfg);
  std::vector<std::uint32_t> expect;
  for (std::string key : {std::string("x"), std::string("y"), std::string("x\x1fy")})
    expect.push_back(static_cast<std::uint32_t>(feature_hash(key, cfg.hash_seed) >> (64 - cfg.buckets_log2)));
  std::sort(expect.begin(), expect.end());
  std::vector<std::uint32_t> got;
  for (const auto& [b, _] : v.entries) got.push_back(b);
  EXPECT_EQ(got, expect);
}

TEST(Vectorize, RejectsBadConfig) {
  EXPECT_THROW(vectorize({"a"}, {0, 18, 1}), std::invalid_argument);
  EXPECT_THROW(vectorize({"a"}, {1, 9, 1}), std::invalid_argument);
  EXPECT_THROW(vectorize({"a"}, {1, 31, 1}), std::invalid_argument);
}

TEST(Vectorize, UnitNormAndSortedProperty) {
  std::mt19937_64 rng(3);
  const std::vector<std::string> vocab = {"a", "bb", "ccc", "dd", "e", "ff", "g"};
  for (int t = 0; t < 200; ++t) {
    std::vector<std::string> toks(1 + rng() % 20);
    for (auto& s : toks) s = vocab[rng() % vocab.size()];
    const auto v = vectorize(toks, {2, 10, 1});
    EXPECT_NEAR(v.norm(), 1.0, 1e-9);
    for (std::size_t i = 1; i < v.size(); ++i) EXPECT_LT(v.entries[i - 1].first, v.entries[i].first);
    for (const auto& [_, w] : v.entries) EXPECT_NE(w, 0.0);
  }
}

TEST(Vectorize, UnigramBagIsPermutationInvariant) {
  std::vector<std::string> toks = {"the", "cat", "sat", "on", "the", "mat"};
  const auto a = vectorize(toks, {1, 18, 5});
  std::reverse(toks.begin(), toks.end());
  EXPECT_EQ(vectorize(toks, {1, 18, 5}), a);
}

TEST(Vectorize, Deterministic) {
  EXPECT_EQ(featurize("Some text, here.", {}), featurize("Some text, here.", {}));
  EXPECT_EQ(featurize("some TEXT here", {}), featurize("Some text here", {}));
}

}  // namespace
}  // namespace rnt
