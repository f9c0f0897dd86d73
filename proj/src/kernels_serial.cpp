#include "rnt/kernels.hpp"

namespace rnt::serial {

std::vector<SparseVector> featurize_all(std::span<const std::string> texts, const VectorizerConfig& config) {
  std::vector<SparseVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(featurize(t, config));
  return out;
}

std::vector<Prediction> predict_all(const Classifier& clf, std::span<const SparseVector> xs) {
  std::vector<Prediction> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(forward(clf, x));
  return out;
}

std::vector<FeatureSet> features_all(std::span<const Prediction> preds, const ClassPrototypes& protos,
                                     int num_classes) {
  std::vector<FeatureSet> out;
  out.reserve(preds.size());
  for (const auto& p : preds) out.push_back(generate_features(p, protos, num_classes));
  return out;
}

std::vector<MassFunction> masses_all(std::span<const FeatureSet> features, const FeatureIndex& index,
                                     double uncertainty) {
  std::vector<MassFunction> out;
  out.reserve(features.size());
  for (const auto& f : features) out.push_back(evidential_mass(f, index, uncertainty));
  return out;
}

FeatureIndex build_index(std::span<const LabeledFeatures> labeled) { return rnt::build_index(labeled); }

}  // namespace rnt::serial
