#include "rnt/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rnt {

const char* to_string(FeatureKind kind) {
  return kind == FeatureKind::kSemantic ? "semantic" : "confidence";
}

ClassPrototypes build_prototypes(std::span<const Prediction> preds,
                                 std::span<const ClassId> gold, int num_classes, int per_class) {
  if (preds.size() != gold.size()) throw InvalidArgument("build_prototypes: size mismatch");
  if (per_class < 1) throw InvalidArgument("build_prototypes: per_class must be >= 1");
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(num_classes));
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] < 0 || gold[i] >= num_classes) throw DataError("build_prototypes: label out of range");
    members[static_cast<std::size_t>(gold[i])].push_back(i);
  }
  ClassPrototypes out;
  out.by_class.resize(static_cast<std::size_t>(num_classes));
  for (int c = 0; c < num_classes; ++c) {
    auto& m = members[static_cast<std::size_t>(c)];
    std::stable_sort(m.begin(), m.end(), [&](std::size_t a, std::size_t b) {
      return preds[a].probs[static_cast<std::size_t>(c)] > preds[b].probs[static_cast<std::size_t>(c)];
    });
    auto& slot = out.by_class[static_cast<std::size_t>(c)];
    for (std::size_t i : m) {
      if (static_cast<int>(slot.size()) == per_class) break;
      if (auto u = normalized_embedding(preds[i])) slot.push_back(std::move(*u));
    }
    if (slot.empty()) throw DataError("build_prototypes: class " + std::to_string(c) + " has no prototype");
  }
  return out;
}

double semantic_distance(std::span<const double> unit_embedding, const ClassPrototypes& protos,
                         ClassId cls) {
  if (cls < 0 || cls >= protos.num_classes()) throw InvalidArgument("semantic_distance: bad class");
  const auto& anchors = protos.by_class[static_cast<std::size_t>(cls)];
  if (anchors.empty()) throw InvalidArgument("semantic_distance: class has no prototypes");
  double sum = 0.0;
  for (const auto& p : anchors) {
    double cos = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) cos += unit_embedding[i] * p[i];
    cos = std::clamp(cos, -1.0, 1.0);
    sum += std::log(std::max(kSimilarityFloor, (1.0 + cos) / 2.0));
  }
  return -sum / static_cast<double>(anchors.size());
}

int discretize_tenths(double value) { return static_cast<int>(std::round(value * 10.0)); }

double discretize(double value) { return discretize_tenths(value) / 10.0; }

std::vector<EvidenceFeature> generate_features(const Prediction& pred, const ClassPrototypes& protos,
                                               int num_classes) {
  std::vector<EvidenceFeature> out;
  if (auto u = normalized_embedding(pred)) {
    out.reserve(static_cast<std::size_t>(num_classes) + 1);
    for (ClassId c = 0; c < num_classes; ++c)
      out.push_back({FeatureKind::kSemantic, c, discretize_tenths(semantic_distance(*u, protos, c))});
  }
  out.push_back({FeatureKind::kConfidence, pred.argmax(), discretize_tenths(pred.max_prob())});
  return out;
}

FeatureIndex build_index(std::span<const LabeledFeatures> labeled) {
  FeatureIndex index;
  for (const auto& item : labeled) {
    for (const auto& f : item.features) {
      auto& counts = index[f];
      ++counts.total;
      if (f.class_id == item.gold_label) ++counts.positive;
    }
  }
  return index;
}

std::optional<double> support_ratio(const FeatureIndex& index, const EvidenceFeature& f) {
  auto it = index.find(f);
  if (it == index.end() || it->second.total == 0) return std::nullopt;
  return static_cast<double>(it->second.positive) / static_cast<double>(it->second.total);
}

}  // namespace rnt
