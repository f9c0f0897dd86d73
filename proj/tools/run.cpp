#include <cmath>
#include <iostream>

#include "commands.hpp"
#include "rnt/artifacts.hpp"
#include "rnt/config.hpp"
#include "rnt/io.hpp"
#include "rnt/pipeline.hpp"

namespace rnt::cli {

namespace {

using nlohmann::json;

void write_checkpoint(const std::filesystem::path& path, const Classifier& clf, const std::string& role) {
  save_checkpoint(clf, path);
  const auto& c = clf.config();
  write_json(std::filesystem::path(path).replace_extension(".json"),
             {{"role", role},
              {"file", path.filename().string()},
              {"digest", io::file_digest(path)},
              {"buckets_log2", c.buckets_log2},
              {"embed_dim", c.embed_dim},
              {"num_classes", c.num_classes},
              {"init_std", c.init_std},
              {"init_seed", c.init_seed}});
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json run_one(const SplitFiles& data, const PipelineConfig& cfg, const std::filesystem::path& dir,
             const RunArgs& args) {
  std::filesystem::create_directories(dir);
  json manifest = {{"command", "run"},
                   {"version", kVersion},
                   {"status", "running"},
                   {"started_at", utc_now()},
                   {"split_dir", std::filesystem::absolute(args.split).string()},
                   {"config_file", args.config.empty() ? json(nullptr) : json(args.config)},
                   {"config", to_json(cfg)},
                   {"seed", cfg.seed},
                   {"inputs", data.digests}};
  write_json(dir / "manifest.json", manifest);

  const RunArtifacts art = run_variant(data.split, cfg);
  const auto& labels = data.labels;

  io::write_file(dir / "metrics.jsonl", metrics_jsonl(art.metrics_log));
  write_checkpoint(dir / "pt_model.bin", art.pt_model, "pt");
  write_checkpoint(dir / "final_model.bin", art.final_model, "final");
  write_assignments_jsonl(dir / "pseudo_labels.jsonl", art.pseudo_labels, labels);
  write_assignments_jsonl(dir / "predictions_test.jsonl", art.test_predictions, labels);
  write_json(dir / "selected_ids.json", art.selected_ids);

  std::vector<std::string> outputs = {"metrics.jsonl",       "pt_model.bin",           "final_model.bin",
                                      "pseudo_labels.jsonl", "predictions_test.jsonl", "selected_ids.json"};
  if (cfg.variant == Variant::kRnt) {
    write_ranked_csv(dir / "ranked_unlabeled.csv", art.ranked, labels);
    const auto dev = make_examples(data.split.dev, cfg.vectorizer);
    write_ranked_labels_jsonl(dir / "ranked_dev.jsonl", art.ranked_dev, join_gold(art.ranked_dev, dev), labels);
    write_json(dir / "cutoff.json", to_json(*art.cutoff, art.theta, art.selected_ids.size()));
    outputs.insert(outputs.end(), {"ranked_unlabeled.csv", "ranked_dev.jsonl", "cutoff.json"});
  }

  json summary = {{"variant", to_string(cfg.variant)},
                  {"theta", art.theta},
                  {"n_selected", art.selected_ids.size()},
                  {"n_unlabeled", data.split.unlabeled.size()},
                  {"pool_pseudo_accuracy", opt(art.pool_pseudo_accuracy)},
                  {"selected_pseudo_accuracy", opt(art.selected_pseudo_accuracy)}};
  if (art.pt_test) summary["pt_test"] = to_json(*art.pt_test);
  if (art.final_test) summary["final_test"] = to_json(*art.final_test);

  json out_digests;
  for (const auto& name : outputs) out_digests[name] = io::file_digest(dir / name);
  manifest["status"] = "complete";
  manifest["finished_at"] = utc_now();
  manifest["outputs"] = out_digests;
  manifest["summary"] = summary;
  write_json(dir / "manifest.json", manifest);

  std::cerr << "[seed " << cfg.seed << "] " << to_string(cfg.variant) << ": theta=" << art.theta
            << " selected=" << art.selected_ids.size() << "/" << data.split.unlabeled.size();
  if (art.final_test) std::cerr << " test macro_f1=" << art.final_test->macro_f1;
  std::cerr << " -> " << dir.string() << "\n";
  return summary;
}

json mean_std(const std::vector<double>& xs) {
  if (xs.empty()) return nullptr;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  const double sd = xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1)) : 0.0;
  return {{"mean", mean}, {"std", sd}, {"n", xs.size()}};
}

}  // namespace

int cmd_run(const RunArgs& a) {
  const std::filesystem::path out = a.out;
  PipelineConfig base;
  if (!a.config.empty()) base = load_config(a.config);
  base = config_from_json(a.overrides, base);
  const SplitFiles data = load_split(a.split);

  if (a.seeds.size() <= 1) {
    PipelineConfig cfg = base;
    if (!a.seeds.empty()) cfg.seed = a.seeds.front();
    run_one(data, cfg, out, a);
    return 0;
  }

  json per_seed = json::array();
  std::vector<double> f1, acc, pt_f1, theta;
  for (const auto s : a.seeds) {
    PipelineConfig cfg = base;
    cfg.seed = s;
    const auto dir = out / ("seed_" + std::to_string(s));
    json summary = run_one(data, cfg, dir, a);
    summary["seed"] = s;
    summary["dir"] = dir.filename().string();
    if (summary.contains("final_test")) {
      f1.push_back(summary["final_test"]["macro_f1"]);
      acc.push_back(summary["final_test"]["accuracy"]);
      pt_f1.push_back(summary["pt_test"]["macro_f1"]);
    }
    theta.push_back(summary["theta"]);
    per_seed.push_back(summary);
  }
  write_json(out / "summary.json", {{"variant", to_string(base.variant)},
                                    {"seeds", a.seeds},
                                    {"runs", per_seed},
                                    {"test_macro_f1", mean_std(f1)},
                                    {"test_accuracy", mean_std(acc)},
                                    {"pt_test_macro_f1", mean_std(pt_f1)},
                                    {"theta", mean_std(theta)}});
  return 0;
}

}  // namespace rnt::cli
