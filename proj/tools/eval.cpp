#include <iostream>
#include <set>

#include "commands.hpp"
#include "rnt/artifacts.hpp"
#include "rnt/config.hpp"
#include "rnt/io.hpp"

namespace rnt::cli {

int cmd_eval(const EvalArgs& a) {
  static const std::set<std::string> known = {"metrics", "curve", "hist", "denoise"};
  if (a.probes.empty()) throw InvalidArgument("--probes: no probe given");
  for (const auto& p : a.probes)
    if (!known.count(p)) throw InvalidArgument("--probes: unknown probe '" + p + "'");

  const std::filesystem::path run = a.run;
  const auto manifest = read_json(run / "manifest.json");
  if (manifest.value("status", "") != "complete") throw DataError(run.string() + ": run did not complete");
  const PipelineConfig cfg = config_from_json(manifest.at("config"));
  const std::filesystem::path split_dir = manifest.at("split_dir").get<std::string>();
  io::require_file(split_dir / "labels.json");
  const LabelMap labels = read_label_map(split_dir / "labels.json");

  for (const auto& probe : a.probes) {
    if (probe == "metrics") {
      io::require_file(run / "predictions_test.jsonl");
      io::require_file(split_dir / "test.jsonl");
      const auto preds = read_assignments_jsonl(run / "predictions_test.jsonl", labels);
      const auto test_docs = read_documents_jsonl(split_dir / "test.jsonl", labels);
      Assignments gold;
      for (const auto& d : test_docs) {
        if (!d.gold_label) throw DataError("test.jsonl: document " + std::to_string(d.id) + " has no label");
        gold[d.id] = *d.gold_label;
      }
      if (gold.empty()) throw DataError("test split is empty");
      nlohmann::json j = {{"split", "test"}, {"n", gold.size()}, {"final", to_json(metrics(preds, gold))}};
      if (std::filesystem::exists(run / "pt_model.bin")) {
        const Classifier pt = load_checkpoint(run / "pt_model.bin");
        j["pt"] = to_json(metrics(pseudo_label(pt, test_docs, cfg.vectorizer), gold));
      }
      write_json(run / "eval_metrics.json", j);
    } else if (probe == "curve") {
      io::require_file(run / "ranked_dev.jsonl");
      const auto ranked = read_ranked_labels_jsonl(run / "ranked_dev.jsonl", labels);
      const auto curve = ranking_curve(ranked, a.proportions);
      write_json(run / "curve.json", to_json(curve));
      io::write_file(run / "curve.csv", curve_csv(curve));
    } else if (probe == "hist") {
      io::require_file(split_dir / "labeled.jsonl");
      const auto labeled = make_examples(read_documents_jsonl(split_dir / "labeled.jsonl", labels), cfg.vectorizer);
      nlohmann::json j;
      for (const char* role : {"pt", "final"}) {
        const auto path = run / (std::string(role) + "_model.bin");
        io::require_file(path);
        j[role] = to_json(confidence_histogram(load_checkpoint(path), labeled, a.bins));
      }
      write_json(run / "hist.json", j);
    } else if (probe == "denoise") {
      io::require_file(run / "ranked_dev.jsonl");
      const auto ranked = read_ranked_labels_jsonl(run / "ranked_dev.jsonl", labels);
      write_json(run / "denoise.json", to_json(denoise_eval(ranked, a.selection_fraction)));
    }
    std::cerr << "eval: " << probe << " done\n";
  }
  return 0;
}

}  // namespace rnt::cli
