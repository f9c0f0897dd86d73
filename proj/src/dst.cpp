#include "rnt/dst.hpp"

#include <algorithm>
#include <cmath>

#include "rnt/kernels.hpp"

namespace rnt {

MassFunction belief_from_feature(std::optional<double> support_ratio, double uncertainty) {
  if (!(uncertainty > 0.0 && uncertainty < 1.0))
    throw InvalidArgument("belief_from_feature: uncertainty d_f must lie in (0,1)");
  if (!support_ratio) return MassFunction::vacuous();
  const double p = *support_ratio;
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("belief_from_feature: ratio outside [0,1]");
  const double hi = std::max(p, 1.0 - p);
  const double lo = std::min(p, 1.0 - p);
  return {(1.0 - uncertainty) * hi, (1.0 - uncertainty) * lo, uncertainty};
}

MassFunction combine(const MassFunction& a, const MassFunction& b) {
  // Each sum has exactly two addends so that swapping a and b only swaps
  // operands of commutative IEEE operations.
  const double conflict = a.clean * b.unclean + a.unclean * b.clean;
  if (conflict >= 1.0 - 1e-12) throw TotalConflict("combine: total conflict between masses");
  const double norm = 1.0 - conflict;
  const double clean = a.clean * b.clean + (a.clean * b.uncertain + a.uncertain * b.clean);
  const double unclean = a.unclean * b.unclean + (a.unclean * b.uncertain + a.uncertain * b.unclean);
  const double uncertain = a.uncertain * b.uncertain;
  return {clean / norm, unclean / norm, uncertain / norm};
}

MassFunction evidential_mass(std::span<const EvidenceFeature> features, const FeatureIndex& index,
                             double uncertainty) {
  if (features.empty()) throw InvalidArgument("evidential_support: no features");
  std::vector<EvidenceFeature> ordered(features.begin(), features.end());
  std::sort(ordered.begin(), ordered.end());
  MassFunction acc = belief_from_feature(support_ratio(index, ordered.front()), uncertainty);
  for (std::size_t i = 1; i < ordered.size(); ++i)
    acc = combine(acc, belief_from_feature(support_ratio(index, ordered[i]), uncertainty));
  return acc;
}

double evidential_support(std::span<const EvidenceFeature> features, const FeatureIndex& index,
                          double uncertainty) {
  return evidential_mass(features, index, uncertainty).clean;
}

RankedSet order_ranked(std::vector<RankedEntry> entries) {
  std::sort(entries.begin(), entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
    if (a.support != b.support) return a.support > b.support;
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    return a.doc_id < b.doc_id;
  });
  return {std::move(entries)};
}

RankedSet rank(std::span<const RankInput> inputs, const FeatureIndex& index, double uncertainty) {
  std::vector<FeatureSet> features;
  features.reserve(inputs.size());
  for (const auto& in : inputs) features.push_back(in.features);
  const auto masses = parallel::masses_all(features, index, uncertainty);
  std::vector<RankedEntry> entries;
  entries.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i)
    entries.push_back({inputs[i].doc_id, inputs[i].pseudo_label, masses[i].clean, inputs[i].confidence});
  return order_ranked(std::move(entries));
}

Cutoff select_cutoff(std::span<const double> p) {
  if (p.empty()) throw InvalidArgument("select_cutoff: no proportion accuracies");
  Cutoff out;
  out.proportion_accuracies.assign(p.begin(), p.end());
  const double n = static_cast<double>(p.size());
  double mean = 0.0;
  for (double v : p) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : p) var += (v - mean) * (v - mean);
  var /= n;
  out.lambda = *std::max_element(p.begin(), p.end()) - std::sqrt(var);
  while (out.prefix < p.size() && p[out.prefix] >= out.lambda) ++out.prefix;
  out.theta = static_cast<double>(out.prefix) / n;
  return out;
}

}  // namespace rnt
