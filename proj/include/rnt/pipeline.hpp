#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rnt/corpus.hpp"
#include "rnt/dst.hpp"
#include "rnt/eval.hpp"
#include "rnt/evidence.hpp"
#include "rnt/featurize.hpp"
#include "rnt/model.hpp"

namespace rnt {

enum class Variant { kRnt, kRntPure, kRntPtConf };

const char* to_string(Variant v);
Variant parse_variant(std::string_view name);

struct PipelineConfig {
  int pt_epochs = 30;
  int nt_epochs = 30;
  int selnt_epochs = 30;
  double lr = 0.5;
  // Learning rate of the NT and SelNT phases; defaults to `lr`.
  std::optional<double> nt_lr;
  int batch = 32;
  // Complementary labels per instance and step; 0 means K-1.
  int nt_negatives = 0;
  double d_f = 0.2;
  int n_prototypes = 5;
  int proportions = 10;
  Variant variant = Variant::kRnt;
  double ptconf_threshold = 0.9;
  // Pseudo-label / filter / NT rounds. Round r > 1 relabels with the model
  // produced by round r - 1.
  int rounds = 1;
  int embed_dim = 64;
  double init_std = 0.02;
  VectorizerConfig vectorizer;
  std::uint64_t seed = 1;

  // Throws ConfigError naming the offending field.
  void validate() const;
  double effective_nt_lr() const { return nt_lr.value_or(lr); }
};

struct EpochRecord {
  int epoch = 0;
  std::string phase;  // "pt", "nt" or "selnt"
  std::string split;  // "train" or "dev"
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double loss = 0.0;                      // train split only
  std::size_t trained = 0;                // train split only
  std::optional<double> mean_conf_clean;  // train split only
  std::optional<double> mean_conf_noisy;  // train split, when noisy instances exist
};

struct TrainOutcome {
  Classifier best;
  Classifier last;
  int best_epoch = 0;
  double best_dev_accuracy = -1.0;
  std::vector<EpochRecord> log;
};

// Vectorizes documents that carry gold labels.
std::vector<Example> make_examples(std::span<const Document> docs, const VectorizerConfig& vectorizer);

// Cross-entropy training from a fresh seeded initialization; returns the
// best-on-dev and the final model. Throws DivergenceError on a non-finite loss.
TrainOutcome run_pt(std::span<const Example> labeled, std::span<const Example> dev, int num_classes,
                    const PipelineConfig& cfg, std::string_view stage = "pt");
TrainOutcome run_pt(const CorpusSplit& split, const PipelineConfig& cfg);

// nt_epochs of negative training with complementary labels, then
// selnt_epochs of negative training restricted, each epoch, to instances whose
// current probability on their training label exceeds 1/K.
TrainOutcome run_nt(std::span<const Example> data, std::span<const Example> dev, int num_classes,
                    const PipelineConfig& cfg, std::string_view stage = "nt");

// Argmax class per document (ties to the lower class).
Assignments pseudo_label(const Classifier& clf, std::span<const Document> unlabeled,
                         const VectorizerConfig& vectorizer);

// First round(theta * n) ids of the ranking. Throws if theta is outside
// (0,1] or the selection is empty.
std::vector<DocId> filter_unlabeled(const RankedSet& ranked, double theta);

// Prototypes and feature index built from the labeled set in a model's latent
// space.
struct EvidenceModel {
  ClassPrototypes prototypes;
  FeatureIndex index;
  int num_classes = 0;
};

EvidenceModel build_evidence(const Classifier& clf, std::span<const Example> labeled,
                             int n_prototypes);

// Pseudo-labels and ranks instances by evidential support.
RankedSet rank_examples(const Classifier& clf, const EvidenceModel& evidence,
                        std::span<const Example> items, double d_f);

// Ranking joined with gold labels and noise flags, for curve and denoise probes.
std::vector<RankedLabel> join_gold(const RankedSet& ranked, std::span<const Example> gold);

struct RunArtifacts {
  Classifier pt_model;
  Classifier final_model;
  Assignments pseudo_labels;
  RankedSet ranked;      // D_u; empty for rnt_pure
  RankedSet ranked_dev;  // empty for rnt_pure
  std::optional<Cutoff> cutoff;
  double theta = 1.0;
  std::vector<DocId> selected_ids;
  std::vector<EpochRecord> metrics_log;
  std::optional<Metrics> pt_test;
  std::optional<Metrics> final_test;
  Assignments test_predictions;
  // Pseudo-label accuracy against hidden gold labels, when available.
  std::optional<double> pool_pseudo_accuracy;
  std::optional<double> selected_pseudo_accuracy;
};

RunArtifacts run_variant(const CorpusSplit& split, const PipelineConfig& cfg);

}  // namespace rnt
