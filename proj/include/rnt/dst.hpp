#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rnt/common.hpp"
#include "rnt/evidence.hpp"

namespace rnt {

// Mass over the frame {C (clean), U (unclean)}: m({C}), m({U}), m({C,U}).
// m(empty set) is implicitly zero.
struct MassFunction {
  double clean = 0.0;
  double unclean = 0.0;
  double uncertain = 1.0;

  static constexpr MassFunction vacuous() { return {0.0, 0.0, 1.0}; }
  double total() const { return clean + unclean + uncertain; }
  friend bool operator==(const MassFunction&, const MassFunction&) = default;
};

class TotalConflict : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// m(C) = (1-d) max(P, 1-P), m(U) = (1-d) min(P, 1-P), m(CU) = d.
// An absent ratio (feature unseen in the labeled set) gives the vacuous mass.
MassFunction belief_from_feature(std::optional<double> support_ratio, double uncertainty);

// Dempster's rule on the two-element frame, renormalized by 1 - conflict with
// conflict = a.C b.U + a.U b.C. Bitwise commutative. Throws TotalConflict when
// conflict >= 1 - 1e-12.
MassFunction combine(const MassFunction& a, const MassFunction& b);

// Fold of `combine` over the features' beliefs in canonical feature order.
MassFunction evidential_mass(std::span<const EvidenceFeature> features, const FeatureIndex& index,
                             double uncertainty);

// Combined m({C}).
double evidential_support(std::span<const EvidenceFeature> features, const FeatureIndex& index,
                          double uncertainty);

struct RankInput {
  DocId doc_id = 0;
  ClassId pseudo_label = 0;
  // PT max probability; first tie-break.
  double confidence = 0.0;
  std::vector<EvidenceFeature> features;
};

struct RankedEntry {
  DocId doc_id = 0;
  ClassId pseudo_label = 0;
  double support = 0.0;
  double confidence = 0.0;
};

// Descending support, then descending confidence, then ascending id.
struct RankedSet {
  std::vector<RankedEntry> entries;

  std::size_t size() const { return entries.size(); }
};

// Orders pre-scored entries; `entries` need not be sorted.
RankedSet order_ranked(std::vector<RankedEntry> entries);

// Scores every input (in parallel) and orders them.
RankedSet rank(std::span<const RankInput> inputs, const FeatureIndex& index, double uncertainty);

struct Cutoff {
  double lambda = 0.0;
  std::vector<double> proportion_accuracies;
  // Number of leading proportions with accuracy >= lambda.
  std::size_t prefix = 0;
  double theta = 0.0;
};

// lambda = max(p) - populationStdDev(p); theta is the maximal prefix of p with
// accuracy >= lambda, as a fraction of len(p).
Cutoff select_cutoff(std::span<const double> proportion_accuracies);

}  // namespace rnt
