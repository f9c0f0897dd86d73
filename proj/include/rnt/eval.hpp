#pragma once

#include <map>
#include <span>
#include <vector>

#include "rnt/common.hpp"
#include "rnt/dst.hpp"
#include "rnt/model.hpp"

namespace rnt {

using Assignments = std::map<DocId, ClassId>;

struct Metrics {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
};

// Macro-F1 averages per-class F1 over every class that occurs in gold or in
// the predictions; a class never predicted scores 0. Throws if the id sets
// differ.
Metrics metrics(const Assignments& preds, const Assignments& gold);
Metrics metrics(std::span<const ClassId> preds, std::span<const ClassId> gold);

// A ranked instance with both its pseudo-label and its gold label.
struct RankedLabel {
  DocId doc_id = 0;
  ClassId pseudo_label = 0;
  ClassId gold_label = 0;
  bool is_noisy = false;
};

struct ProportionStats {
  std::size_t index = 0;
  std::size_t n = 0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
};

struct RankingCurve {
  std::vector<ProportionStats> proportions;

  std::vector<double> accuracies() const;
};

// Splits the ranked list into min(proportions, n) contiguous chunks of
// floor(n / count) items, the remainder going to the last chunk.
RankingCurve ranking_curve(std::span<const RankedLabel> ranked, int proportions);

struct ConfidenceHistogram {
  int bins = 10;
  std::vector<std::size_t> clean;
  std::vector<std::size_t> noisy;
  double mean_clean = 0.0;
  double mean_noisy = 0.0;
};

// Probability a model assigns to an instance's training label, with the
// instance's noise flag.
struct ConfidenceSample {
  double confidence = 0.0;
  bool noisy = false;
};

// Left-closed bins over [0,1]; a confidence of exactly 1 lands in the top bin.
int histogram_bin(double confidence, int bins);

ConfidenceHistogram confidence_histogram(std::span<const ConfidenceSample> samples, int bins);

// Evaluates `clf` on each example's (possibly noisy) training label.
ConfidenceHistogram confidence_histogram(const Classifier& clf, std::span<const Example> examples,
                                         int bins);

struct DenoiseReport {
  double clean_acc = 0.0;
  double noisy_acc = 0.0;
  // Share of truly clean instances among the top selection_fraction of the ranking.
  double denoising_accuracy = 0.0;
  double selection_fraction = 0.0;
};

// `ranked` is in ranking order; `pseudo_label` holds the classifier's
// prediction and `is_noisy` the perturbation flag.
DenoiseReport denoise_eval(std::span<const RankedLabel> ranked, double selection_fraction);

}  // namespace rnt
