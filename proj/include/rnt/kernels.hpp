#pragma once

// Batch kernels over independent instances. `parallel` uses OpenMP; `serial`
// is the reference implementation kept for tests and benchmarks. Both produce
// bitwise-identical results: each output element is computed by exactly the
// same arithmetic regardless of the thread that owns it.

#include <span>
#include <vector>

#include "rnt/dst.hpp"
#include "rnt/evidence.hpp"
#include "rnt/featurize.hpp"
#include "rnt/model.hpp"

namespace rnt {

using FeatureSet = std::vector<EvidenceFeature>;

namespace serial {

std::vector<SparseVector> featurize_all(std::span<const std::string> texts, const VectorizerConfig& config);
std::vector<Prediction> predict_all(const Classifier& clf, std::span<const SparseVector> xs);
std::vector<FeatureSet> features_all(std::span<const Prediction> preds, const ClassPrototypes& protos,
                                     int num_classes);
std::vector<MassFunction> masses_all(std::span<const FeatureSet> features, const FeatureIndex& index,
                                     double uncertainty);
FeatureIndex build_index(std::span<const LabeledFeatures> labeled);

}  // namespace serial

namespace parallel {

std::vector<SparseVector> featurize_all(std::span<const std::string> texts, const VectorizerConfig& config);
std::vector<Prediction> predict_all(const Classifier& clf, std::span<const SparseVector> xs);
std::vector<FeatureSet> features_all(std::span<const Prediction> preds, const ClassPrototypes& protos,
                                     int num_classes);
std::vector<MassFunction> masses_all(std::span<const FeatureSet> features, const FeatureIndex& index,
                                     double uncertainty);
// Per-thread partial indexes merged after the parallel region; counts are
// integers, so the merge order does not matter.
FeatureIndex build_index(std::span<const LabeledFeatures> labeled);

}  // namespace parallel

}  // namespace rnt
