#pragma once

// On-disk formats of run outputs. All writers are deterministic: identical
// inputs give byte-identical files.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rnt/corpus.hpp"
#include "rnt/dst.hpp"
#include "rnt/eval.hpp"
#include "rnt/pipeline.hpp"

namespace rnt {

// One JSON object per line: {epoch, phase, split, accuracy, macro_f1,
// mean_conf_clean, mean_conf_noisy, loss, trained}; absent means are null.
std::string metrics_jsonl(std::span<const EpochRecord> log);
std::vector<EpochRecord> parse_metrics_jsonl(const std::string& text);

// CSV doc_id,pseudo_label,support,rank (rank is 1-based); labels by name.
void write_ranked_csv(const std::filesystem::path& path, const RankedSet& ranked, const LabelMap& labels);
RankedSet read_ranked_csv(const std::filesystem::path& path, const LabelMap& labels);

// JSONL {doc_id, pseudo_label, gold_label, is_noisy, support, confidence, rank}.
void write_ranked_labels_jsonl(const std::filesystem::path& path, const RankedSet& ranked,
                               std::span<const RankedLabel> joined, const LabelMap& labels);
std::vector<RankedLabel> read_ranked_labels_jsonl(const std::filesystem::path& path, const LabelMap& labels);

nlohmann::json to_json(const Cutoff& cutoff, double theta, std::size_t n_selected);

// JSONL {doc_id, label}.
void write_assignments_jsonl(const std::filesystem::path& path, const Assignments& a, const LabelMap& labels);
Assignments read_assignments_jsonl(const std::filesystem::path& path, const LabelMap& labels);

nlohmann::json to_json(const Metrics& m);
nlohmann::json to_json(const RankingCurve& curve);
std::string curve_csv(const RankingCurve& curve);
nlohmann::json to_json(const ConfidenceHistogram& h);
nlohmann::json to_json(const DenoiseReport& r);

// Diagnostic dumps: {doc_id, kind, class_id, value} per feature and
// {kind, class_id, value, total, positive} per index entry (sorted).
std::string features_jsonl(std::span<const DocId> ids, std::span<const std::vector<EvidenceFeature>> features);
std::string index_jsonl(const FeatureIndex& index);

}  // namespace rnt
