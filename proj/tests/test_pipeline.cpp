#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "rnt/artifacts.hpp"
#include "rnt/pipeline.hpp"
#include "rnt/rng.hpp"

namespace rnt {
namespace {

// K-class corpus where each class owns a word list and draws a share of
// shared filler words; `overlap` is the chance a slot uses a random class's
// word instead of the document's own.
std::vector<Document> toy_corpus(std::size_t n, int K, double overlap, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Document> docs;
  for (std::size_t i = 0; i < n; ++i) {
    const ClassId y = static_cast<ClassId>(i % static_cast<std::size_t>(K));
    std::string text;
    for (int k = 0; k < 12; ++k) {
      const ClassId c = u(rng) < overlap ? static_cast<ClassId>(rng() % static_cast<std::uint64_t>(K)) : y;
      text += "c" + std::to_string(c) + "w" + std::to_string(rng() % 20) + " filler" + std::to_string(rng() % 30) + " ";
    }
    docs.push_back({static_cast<DocId>(i), text, y, {}, false});
  }
  return docs;
}

PipelineConfig small_cfg() {
  PipelineConfig c;
  c.pt_epochs = 8;
  c.nt_epochs = 8;
  c.selnt_epochs = 4;
  c.embed_dim = 16;
  c.vectorizer.buckets_log2 = 14;
  c.seed = 3;
  return c;
}

TEST(Config, Validation) {
  auto c = small_cfg();
  c.pt_epochs = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_cfg();
  c.variant = Variant::kRntPtConf;
  c.ptconf_threshold = 1.0;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_EQ(parse_variant("rnt_pure"), Variant::kRntPure);
  EXPECT_THROW(parse_variant("rnt2"), ConfigError);
}

TEST(RunPt, SeparableCorpusReachesPerfectDev) {
  const auto docs = toy_corpus(200, 2, 0.0, 1);
  const auto ex = make_examples(docs, small_cfg().vectorizer);
  const std::span<const Example> all(ex);
  const auto out = run_pt(all.subspan(0, 150), all.subspan(150), 2, small_cfg());
  EXPECT_EQ(out.best_dev_accuracy, 1.0);
  EXPECT_GE(out.best_epoch, 1);
  EXPECT_EQ(out.log.size(), 2u * 8u);
}

TEST(RunPt, DeterministicTrace) {
  const auto docs = toy_corpus(120, 3, 0.3, 2);
  const auto ex = make_examples(docs, small_cfg().vectorizer);
  const std::span<const Example> all(ex);
  const auto a = run_pt(all.subspan(0, 90), all.subspan(90), 3, small_cfg());
  const auto b = run_pt(all.subspan(0, 90), all.subspan(90), 3, small_cfg());
  EXPECT_EQ(metrics_jsonl(a.log), metrics_jsonl(b.log));
  EXPECT_EQ(a.best, b.best);
}

TEST(RunPt, Preconditions) {
  const auto ex = make_examples(toy_corpus(20, 2, 0.0, 1), small_cfg().vectorizer);
  auto c = small_cfg();
  c.pt_epochs = 0;
  EXPECT_THROW(run_pt(ex, {}, 2, c), ConfigError);
  EXPECT_THROW(run_pt({}, {}, 2, small_cfg()), InvalidArgument);
  std::vector<Example> one_class;
  for (const auto& e : ex)
    if (e.label == 0) one_class.push_back(e);
  EXPECT_THROW(run_pt(one_class, {}, 2, small_cfg()), DataError);
}

TEST(RunPt, BestIsEarliestMaximum) {
  const auto ex = make_examples(toy_corpus(160, 2, 0.4, 5), small_cfg().vectorizer);
  const std::span<const Example> all(ex);
  const auto out = run_pt(all.subspan(0, 100), all.subspan(100), 2, small_cfg());
  double best = -1.0;
  int epoch = 0;
  for (const auto& r : out.log)
    if (r.split == "dev" && r.accuracy > best) {
      best = r.accuracy;
      epoch = r.epoch;
    }
  EXPECT_EQ(out.best_epoch, epoch);
  EXPECT_EQ(out.best_dev_accuracy, best);
}

// With K=2 the single complementary label of y is 1-y and the NT loss equals
// the PT loss, so with the same stage seeds both runs follow the same path.
TEST(RunNt, BinaryNtReplaysPt) {
  const auto ex = make_examples(toy_corpus(300, 2, 0.5, 11), small_cfg().vectorizer);
  const std::span<const Example> all(ex);
  auto cfg = small_cfg();
  cfg.selnt_epochs = 0;
  cfg.nt_epochs = cfg.pt_epochs;
  const auto pt = run_pt(all.subspan(0, 200), all.subspan(200), 2, cfg, "pt");
  const auto nt = run_nt(all.subspan(0, 200), all.subspan(200), 2, cfg, "pt");
  ASSERT_EQ(pt.log.size(), nt.log.size());
  for (std::size_t i = 0; i < pt.log.size(); ++i) {
    EXPECT_NEAR(pt.log[i].loss, nt.log[i].loss, 1e-9) << i;
    EXPECT_NEAR(pt.log[i].accuracy, nt.log[i].accuracy, 0.01);
  }
}

TEST(RunNt, BinaryMatchesPtOnCleanLabels) {
  double pt_sum = 0.0, nt_sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto ex = make_examples(toy_corpus(300, 2, 0.5, 10 + seed), small_cfg().vectorizer);
    const std::span<const Example> all(ex);
    auto cfg = small_cfg();
    cfg.seed = seed;
    cfg.pt_epochs = cfg.nt_epochs = 30;
    cfg.selnt_epochs = 0;
    pt_sum += run_pt(all.subspan(0, 200), all.subspan(200), 2, cfg).best_dev_accuracy;
    nt_sum += run_nt(all.subspan(0, 200), all.subspan(200), 2, cfg).best_dev_accuracy;
  }
  EXPECT_NEAR(pt_sum / 3.0, nt_sum / 3.0, 0.02);
}

TEST(RunNt, SelNtSkipsInstancesAtChanceConfidence) {
  // Two empty documents with opposite labels: their bias gradients cancel,
  // so probabilities stay exactly uniform and no SelNT epoch trains anything.
  std::vector<Example> data = {{1, {}, 0, false}, {2, {}, 1, false}};
  auto cfg = small_cfg();
  cfg.nt_epochs = 2;
  cfg.selnt_epochs = 3;
  cfg.batch = 2;
  const auto out = run_nt(data, {}, 2, cfg);
  int selnt = 0;
  for (const auto& r : out.log)
    if (r.phase == "selnt") {
      ++selnt;
      EXPECT_EQ(r.trained, 0u);
    }
  EXPECT_EQ(selnt, 3);
  for (double b : out.last.bias()) EXPECT_EQ(b, 0.0);
}

TEST(RunNt, CleanInstancesEndMoreConfident) {
  auto docs = toy_corpus(600, 4, 0.3, 21);
  docs = inject_symmetric_noise(docs, 0.3, 4, 4);
  const auto ex = make_examples(docs, small_cfg().vectorizer);
  auto cfg = small_cfg();
  cfg.nt_lr = 0.5;
  const auto out = run_nt(ex, {}, 4, cfg);
  const auto& last_train = out.log.back();
  ASSERT_EQ(last_train.split, "train");
  EXPECT_GT(*last_train.mean_conf_clean, *last_train.mean_conf_noisy);
}

TEST(PseudoLabel, TotalAndTieToClassZero) {
  const auto docs = toy_corpus(40, 2, 0.0, 3);
  const auto ex = make_examples(docs, small_cfg().vectorizer);
  auto cfg = small_cfg();
  cfg.pt_epochs = 30;
  const auto clf = run_pt(ex, {}, 2, cfg).last;
  std::vector<Document> unl = docs;
  for (auto& d : unl) d.gold_label.reset();
  unl.push_back({999, "", std::nullopt, {}, false});
  const auto pl = pseudo_label(clf, unl, small_cfg().vectorizer);
  EXPECT_EQ(pl.size(), unl.size());
  for (const auto& d : docs) EXPECT_EQ(pl.at(d.id), *d.gold_label);
  ClassifierConfig zc = clf.config();
  EXPECT_EQ(pseudo_label(Classifier::zeros(zc), unl, small_cfg().vectorizer).at(999), 0);
}

RankedSet ranked_ids(std::size_t n) {
  std::vector<RankedEntry> e;
  for (std::size_t i = 0; i < n; ++i) e.push_back({static_cast<DocId>(i), 0, 1.0 - 0.01 * static_cast<double>(i), 0.5});
  return order_ranked(e);
}

TEST(Filter, PrefixSelection) {
  const auto r = ranked_ids(10);
  EXPECT_EQ(filter_unlabeled(r, 0.2), (std::vector<DocId>{0, 1}));
  EXPECT_EQ(filter_unlabeled(r, 1.0).size(), 10u);
  EXPECT_THROW(filter_unlabeled(r, 0.04), InvalidArgument);
  EXPECT_THROW(filter_unlabeled(r, 0.0), InvalidArgument);
  EXPECT_THROW(filter_unlabeled(r, 1.5), InvalidArgument);
  for (double a = 0.1; a <= 1.0; a += 0.1) {
    const auto small = filter_unlabeled(r, a);
    const auto big = filter_unlabeled(r, std::min(1.0, a + 0.2));
    EXPECT_TRUE(std::equal(small.begin(), small.end(), big.begin()));
  }
}

CorpusSplit toy_split(std::uint64_t seed) {
  const auto docs = toy_corpus(400, 3, 0.5, seed);
  return split(docs, {0.1, 0.2, 0.2}, 3, seed);
}

TEST(RunVariant, PureSelectsEverything) {
  const auto s = toy_split(4);
  auto cfg = small_cfg();
  cfg.variant = Variant::kRntPure;
  const auto art = run_variant(s, cfg);
  EXPECT_EQ(art.theta, 1.0);
  EXPECT_EQ(art.selected_ids.size(), s.unlabeled.size());
  EXPECT_TRUE(art.ranked.entries.empty());
  EXPECT_FALSE(art.cutoff);
  EXPECT_EQ(art.pseudo_labels.size(), s.unlabeled.size());
  ASSERT_TRUE(art.final_test);
}

TEST(RunVariant, PtConfThreshold) {
  const auto s = toy_split(5);
  auto cfg = small_cfg();
  cfg.variant = Variant::kRntPtConf;
  const auto art = run_variant(s, cfg);
  std::set<DocId> expect;
  for (std::size_t i = 0; i < s.unlabeled.size(); ++i)
    if (forward(art.pt_model, featurize(s.unlabeled[i].text, cfg.vectorizer)).max_prob() >= cfg.ptconf_threshold)
      expect.insert(s.unlabeled[i].id);
  EXPECT_EQ(std::set<DocId>(art.selected_ids.begin(), art.selected_ids.end()), expect);
}

TEST(RunVariant, RntSelectsRankPrefixAndLeavesGoldUntouched) {
  const auto s = toy_split(6);
  const auto before = s;
  const auto art = run_variant(s, small_cfg());
  ASSERT_TRUE(art.cutoff);
  const auto k = static_cast<std::size_t>(std::llround(art.theta * static_cast<double>(s.unlabeled.size())));
  ASSERT_EQ(art.selected_ids.size(), k);
  for (std::size_t i = 0; i < k; ++i) EXPECT_EQ(art.selected_ids[i], art.ranked.entries[i].doc_id);
  std::set<DocId> pool;
  for (const auto& d : s.unlabeled) pool.insert(d.id);
  for (DocId id : art.selected_ids) EXPECT_TRUE(pool.count(id));
  for (std::size_t i = 0; i < s.unlabeled.size(); ++i) EXPECT_FALSE(s.unlabeled[i].gold_label);
  EXPECT_EQ(s.hidden_gold, before.hidden_gold);
  EXPECT_EQ(art.ranked_dev.size(), s.dev.size());
  ASSERT_TRUE(art.selected_pseudo_accuracy && art.pool_pseudo_accuracy);
}

TEST(RunVariant, OverlappingSplitsRejected) {
  auto s = toy_split(7);
  s.test.push_back(s.labeled.front());
  EXPECT_THROW(run_variant(s, small_cfg()), DataError);
}

TEST(RunVariant, Deterministic) {
  const auto s = toy_split(8);
  const auto a = run_variant(s, small_cfg());
  const auto b = run_variant(s, small_cfg());
  EXPECT_EQ(metrics_jsonl(a.metrics_log), metrics_jsonl(b.metrics_log));
  EXPECT_EQ(a.final_model, b.final_model);
  EXPECT_EQ(a.selected_ids, b.selected_ids);
}

TEST(RunVariant, SecondRoundUsesItsOwnStage) {
  const auto s = toy_split(9);
  auto cfg = small_cfg();
  cfg.rounds = 2;
  const auto art = run_variant(s, cfg);
  std::size_t nt_records = 0;
  for (const auto& r : art.metrics_log) nt_records += r.phase != "pt";
  EXPECT_EQ(nt_records, 2u * 2u * static_cast<std::size_t>(cfg.nt_epochs + cfg.selnt_epochs));
}

}  // namespace
}  // namespace rnt
