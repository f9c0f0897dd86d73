#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "rnt/eval.hpp"
#include "rnt/rng.hpp"

namespace rnt {
namespace {

Assignments as_map(std::vector<ClassId> v) {
  Assignments m;
  for (std::size_t i = 0; i < v.size(); ++i) m[static_cast<DocId>(i)] = v[i];
  return m;
}

TEST(Metrics, Examples) {
  auto m = metrics(as_map({0, 1, 2}), as_map({0, 1, 2}));
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_EQ(m.macro_f1, 1.0);
  m = metrics(as_map({0, 1, 1, 1}), as_map({0, 0, 1, 1}));
  EXPECT_DOUBLE_EQ(m.accuracy, 0.75);
  EXPECT_NEAR(m.macro_f1, (2.0 / 3.0 + 0.8) / 2.0, 1e-15);
  m = metrics(as_map({1, 1, 1, 1}), as_map({0, 0, 1, 1}));
  EXPECT_DOUBLE_EQ(m.accuracy, 0.5);
  EXPECT_NEAR(m.macro_f1, 1.0 / 3.0, 1e-15);
}

TEST(Metrics, IdMismatch) {
  Assignments a = {{1, 0}, {2, 0}}, b = {{1, 0}, {3, 0}};
  EXPECT_THROW(metrics(a, b), InvalidArgument);
  EXPECT_THROW(metrics(as_map({0}), as_map({0, 1})), InvalidArgument);
}

TEST(Metrics, PermutationInvariant) {
  Rng rng(3);
  std::vector<ClassId> p(60), g(60);
  for (auto& v : p) v = static_cast<ClassId>(rng() % 4);
  for (auto& v : g) v = static_cast<ClassId>(rng() % 4);
  const auto base = metrics(p, g);
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<ClassId> p2, g2;
  for (auto i : order) {
    p2.push_back(p[i]);
    g2.push_back(g[i]);
  }
  const auto m = metrics(p2, g2);
  EXPECT_EQ(m.accuracy, base.accuracy);
  EXPECT_NEAR(m.macro_f1, base.macro_f1, 1e-15);
}

std::vector<RankedLabel> ranked_from(const std::vector<bool>& correct, const std::vector<bool>& noisy = {}) {
  std::vector<RankedLabel> out;
  for (std::size_t i = 0; i < correct.size(); ++i)
    out.push_back({static_cast<DocId>(i), correct[i] ? 0 : 1, 0, !noisy.empty() && noisy[i]});
  return out;
}

TEST(RankingCurve, Partition) {
  const auto curve = ranking_curve(ranked_from(std::vector<bool>(95, true)), 10);
  ASSERT_EQ(curve.proportions.size(), 10u);
  for (std::size_t k = 0; k < 9; ++k) EXPECT_EQ(curve.proportions[k].n, 9u);
  EXPECT_EQ(curve.proportions[9].n, 14u);
  for (const auto& p : curve.proportions) EXPECT_EQ(p.accuracy, 1.0);
  EXPECT_EQ(ranking_curve(ranked_from({true, false, true}), 10).proportions.size(), 3u);
  EXPECT_TRUE(ranking_curve({}, 10).proportions.empty());
  EXPECT_THROW(ranking_curve({}, 0), InvalidArgument);
}

TEST(RankingCurve, MonotoneFixture) {
  std::vector<bool> correct;
  for (int i = 0; i < 100; ++i) correct.push_back(i < 70);
  const auto acc = ranking_curve(ranked_from(correct), 10).accuracies();
  for (std::size_t k = 1; k < acc.size(); ++k) EXPECT_LE(acc[k], acc[k - 1]);
}

TEST(RankingCurve, WeightedMeanIsOverallAccuracy) {
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    std::vector<bool> correct(20 + rng() % 200);
    std::size_t ok = 0;
    for (std::size_t i = 0; i < correct.size(); ++i) ok += correct[i] = rng() % 3 != 0;
    const auto curve = ranking_curve(ranked_from(correct), 1 + static_cast<int>(rng() % 10));
    double weighted = 0.0;
    std::size_t total = 0;
    for (const auto& p : curve.proportions) {
      weighted += p.accuracy * static_cast<double>(p.n);
      total += p.n;
    }
    EXPECT_EQ(total, correct.size());
    EXPECT_NEAR(weighted / static_cast<double>(total), static_cast<double>(ok) / static_cast<double>(total), 1e-9);
  }
}

TEST(Histogram, BinsAndCounts) {
  EXPECT_EQ(histogram_bin(0.55, 10), 5);
  EXPECT_EQ(histogram_bin(1.0, 10), 9);
  EXPECT_EQ(histogram_bin(0.0, 10), 0);
  std::vector<ConfidenceSample> s = {{1.0, false}, {1.0, true}, {1.0, false}};
  const auto h = confidence_histogram(s, 10);
  EXPECT_EQ(h.clean[9], 2u);
  EXPECT_EQ(h.noisy[9], 1u);
  EXPECT_EQ(std::accumulate(h.clean.begin(), h.clean.end(), std::size_t{0}), 2u);
  EXPECT_EQ(h.mean_clean, 1.0);
}

TEST(Denoise, PerfectAndFullSelection) {
  std::vector<bool> noisy(100, false);
  for (int i = 70; i < 100; ++i) noisy[static_cast<std::size_t>(i)] = true;
  const auto ranked = ranked_from(std::vector<bool>(100, true), noisy);
  EXPECT_DOUBLE_EQ(denoise_eval(ranked, 0.7).denoising_accuracy, 1.0);
  EXPECT_DOUBLE_EQ(denoise_eval(ranked, 1.0).denoising_accuracy, 0.7);
  EXPECT_THROW(denoise_eval(ranked, 0.0), InvalidArgument);
}

TEST(Denoise, RandomRankingNearBaseRate) {
  Rng rng(31);
  std::vector<bool> noisy(1000, false);
  for (int i = 0; i < 300; ++i) noisy[static_cast<std::size_t>(i)] = true;
  double sum = 0.0;
  const int trials = 500;
  for (int t = 0; t < trials; ++t) {
    std::shuffle(noisy.begin(), noisy.end(), rng);
    sum += denoise_eval(ranked_from(std::vector<bool>(1000, true), noisy), 0.7).denoising_accuracy;
  }
  EXPECT_NEAR(sum / trials, 0.7, 0.005);
}

TEST(Denoise, SubgroupAccuracies) {
  const auto r = denoise_eval(ranked_from({true, false, true, true}, {false, false, true, true}), 0.5);
  EXPECT_DOUBLE_EQ(r.clean_acc, 0.5);
  EXPECT_DOUBLE_EQ(r.noisy_acc, 1.0);
}

}  // namespace
}  // namespace rnt
