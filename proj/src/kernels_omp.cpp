#include <omp.h>

#include <exception>

#include "rnt/kernels.hpp"

namespace rnt::parallel {

namespace {

// Runs body(i) for i in [0, n) across threads. The first exception thrown by
// any iteration is rethrown on the calling thread.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  std::exception_ptr error;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(rnt_parallel_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<SparseVector> featurize_all(std::span<const std::string> texts, const VectorizerConfig& config) {
  std::vector<SparseVector> out(texts.size());
  parallel_for(texts.size(), [&](std::size_t i) { out[i] = featurize(texts[i], config); });
  return out;
}

std::vector<Prediction> predict_all(const Classifier& clf, std::span<const SparseVector> xs) {
  std::vector<Prediction> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { out[i] = forward(clf, xs[i]); });
  return out;
}

std::vector<FeatureSet> features_all(std::span<const Prediction> preds, const ClassPrototypes& protos,
                                     int num_classes) {
  std::vector<FeatureSet> out(preds.size());
  parallel_for(preds.size(),
               [&](std::size_t i) { out[i] = generate_features(preds[i], protos, num_classes); });
  return out;
}

std::vector<MassFunction> masses_all(std::span<const FeatureSet> features, const FeatureIndex& index,
                                     double uncertainty) {
  std::vector<MassFunction> out(features.size());
  parallel_for(features.size(),
               [&](std::size_t i) { out[i] = evidential_mass(features[i], index, uncertainty); });
  return out;
}

FeatureIndex build_index(std::span<const LabeledFeatures> labeled) {
  const int threads = omp_get_max_threads();
  std::vector<FeatureIndex> partial(static_cast<std::size_t>(threads));
#pragma omp parallel num_threads(threads)
  {
    auto& mine = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(labeled.size()); ++i) {
      const auto& item = labeled[static_cast<std::size_t>(i)];
      for (const auto& f : item.features) {
        auto& c = mine[f];
        ++c.total;
        if (f.class_id == item.gold_label) ++c.positive;
      }
    }
  }
  FeatureIndex merged;
  for (const auto& p : partial) {
    for (const auto& [f, c] : p) {
      auto& m = merged[f];
      m.total += c.total;
      m.positive += c.positive;
    }
  }
  return merged;
}

}  // namespace rnt::parallel
