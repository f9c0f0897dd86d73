#include <gtest/gtest.h>

#include <json.hpp>

#include "rnt/artifacts.hpp"
#include "rnt/config.hpp"
#include "testing.hpp"

namespace rnt {
namespace {

using nlohmann::json;

std::string error_of(const json& j) {
  try {
    config_from_json(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(ConfigJson, RoundTrip) {
  PipelineConfig c;
  c.lr = 0.25;
  c.nt_lr = 0.75;
  c.variant = Variant::kRntPtConf;
  c.vectorizer.n_max = 3;
  c.seed = 99;
  const auto back = config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_EQ(back.effective_nt_lr(), 0.75);
  EXPECT_TRUE(to_json(PipelineConfig{})["nt_lr"].is_null());
}

TEST(ConfigJson, OverlaysOntoBase) {
  PipelineConfig base;
  base.batch = 7;
  const auto c = config_from_json(json{{"lr", 0.1}}, base);
  EXPECT_EQ(c.batch, 7);
  EXPECT_EQ(c.lr, 0.1);
}

TEST(ConfigJson, ErrorsNameTheField) {
  EXPECT_EQ(error_of(json{{"bogus", 1}}).rfind("bogus", 0), 0u);
  EXPECT_EQ(error_of(json{{"vectorizer", {{"n_max", "two"}}}}).rfind("vectorizer.n_max", 0), 0u);
  EXPECT_EQ(error_of(json{{"pt_epochs", 0}}).rfind("pt_epochs", 0), 0u);
  EXPECT_EQ(error_of(json{{"variant", "other"}}).rfind("variant", 0), 0u);
  EXPECT_EQ(error_of(json{{"d_f", 1.5}}).rfind("d_f", 0), 0u);
}

TEST(ConfigJson, Files) {
  testing::TempDir tmp;
  EXPECT_THROW(load_config(tmp.path() / "none.json"), MissingArtifact);
  EXPECT_THROW(load_config(tmp.write("bad.json", "{not json")), ConfigError);
  EXPECT_EQ(load_config(tmp.write("ok.json", R"({"batch": 16})")).batch, 16);
}

TEST(Artifacts, MetricsJsonlRoundTrip) {
  std::vector<EpochRecord> log = {{1, "pt", "train", 0.5, 0.4, 0.9, 10, 0.6, std::nullopt},
                                  {1, "pt", "dev", 0.55, 0.45, 0.0, 0, std::nullopt, std::nullopt},
                                  {2, "selnt", "train", 0.7, 0.6, 0.3, 8, 0.8, 0.2}};
  const auto text = metrics_jsonl(log);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  const auto back = parse_metrics_jsonl(text);
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back[2].phase, "selnt");
  EXPECT_EQ(back[2].mean_conf_noisy, 0.2);
  EXPECT_FALSE(back[0].mean_conf_noisy);
  EXPECT_EQ(back[0].trained, 10u);
  EXPECT_EQ(metrics_jsonl(back), text);
}

TEST(Artifacts, RankedCsvRoundTrip) {
  testing::TempDir tmp;
  LabelMap labels({"a", "b"});
  const auto ranked = order_ranked({{5, 1, 0.9, 0.8}, {2, 0, 0.25, 0.6}, {7, 1, 0.25, 0.7}});
  write_ranked_csv(tmp.path() / "r.csv", ranked, labels);
  const auto text = io::read_file(tmp.path() / "r.csv");
  EXPECT_EQ(text.rfind("doc_id,pseudo_label,support,rank\n5,b,", 0), 0u);
  const auto back = read_ranked_csv(tmp.path() / "r.csv", labels);
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.entries[i].doc_id, ranked.entries[i].doc_id);
    EXPECT_EQ(back.entries[i].pseudo_label, ranked.entries[i].pseudo_label);
    EXPECT_EQ(back.entries[i].support, ranked.entries[i].support);
  }
}

TEST(Artifacts, AssignmentsAndCurve) {
  testing::TempDir tmp;
  LabelMap labels({"x", "y"});
  const Assignments a = {{1, 1}, {3, 0}};
  write_assignments_jsonl(tmp.path() / "a.jsonl", a, labels);
  EXPECT_EQ(read_assignments_jsonl(tmp.path() / "a.jsonl", labels), a);

  RankingCurve curve;
  curve.proportions = {{0, 5, 1.0, 1.0}, {1, 5, 0.6, 0.5}};
  EXPECT_EQ(curve_csv(curve), "proportion_index,accuracy\n0,1\n1,0.6\n");
  const auto cj = to_json(Cutoff{0.84, {0.9, 0.8}, 1, 0.5}, 0.5, 40);
  EXPECT_EQ(cj["n_selected"], 40);
  EXPECT_EQ(cj["theta"], 0.5);
  EXPECT_TRUE(cj.contains("lambda"));
}

}  // namespace
}  // namespace rnt
