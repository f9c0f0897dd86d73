#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "rnt/common.hpp"
#include "rnt/model.hpp"

namespace rnt {

inline constexpr double kSimilarityFloor = 1e-12;

enum class FeatureKind : std::uint8_t { kSemantic = 0, kConfidence = 1 };

const char* to_string(FeatureKind kind);

// A discretized (kind, class, value) key shared between labeled and unlabeled
// instances. Values live on the one-decimal grid and are stored in tenths.
struct EvidenceFeature {
  FeatureKind kind = FeatureKind::kSemantic;
  ClassId class_id = 0;
  int tenths = 0;

  double value() const { return tenths / 10.0; }
  // Canonical order: semantic before confidence, then class, then value.
  friend auto operator<=>(const EvidenceFeature&, const EvidenceFeature&) = default;
};

struct EvidenceFeatureHash {
  std::size_t operator()(const EvidenceFeature& f) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(f.kind) << 56) ^
                                      (static_cast<std::uint64_t>(static_cast<std::uint32_t>(f.class_id)) << 24) ^
                                      static_cast<std::uint32_t>(f.tenths));
  }
};

struct FeatureCounts {
  std::int64_t total = 0;
  std::int64_t positive = 0;
};

using FeatureIndex = std::unordered_map<EvidenceFeature, FeatureCounts, EvidenceFeatureHash>;

// For each class, unit-norm embeddings of up to N labeled anchors.
struct ClassPrototypes {
  std::vector<std::vector<std::vector<double>>> by_class;

  int num_classes() const { return static_cast<int>(by_class.size()); }
};

// Picks, per class, the N labeled instances with the highest probability on
// their gold class (ties: lower position first). Degenerate embeddings are
// skipped. Throws DataError if a class ends up with no prototype.
ClassPrototypes build_prototypes(std::span<const Prediction> preds,
                                 std::span<const ClassId> gold, int num_classes, int per_class);

// -(1/N) sum_n log(max(1e-12, (1 + cos_n) / 2)) over the prototypes of `cls`.
double semantic_distance(std::span<const double> unit_embedding, const ClassPrototypes& protos,
                         ClassId cls);

// Rounds to one decimal, ties away from zero.
double discretize(double value);
int discretize_tenths(double value);

// K semantic features (one per class) plus one confidence feature
// (argmax, discretized max probability), in canonical order. A degenerate
// embedding yields the confidence feature only.
std::vector<EvidenceFeature> generate_features(const Prediction& pred, const ClassPrototypes& protos,
                                               int num_classes);

struct LabeledFeatures {
  ClassId gold_label = 0;
  std::span<const EvidenceFeature> features;
};

FeatureIndex build_index(std::span<const LabeledFeatures> labeled);

// positive / total, or nullopt for a feature no labeled instance emitted.
std::optional<double> support_ratio(const FeatureIndex& index, const EvidenceFeature& f);

}  // namespace rnt
