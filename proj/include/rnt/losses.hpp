#pragma once

#include <span>
#include <vector>

#include "rnt/common.hpp"
#include "rnt/rng.hpp"

namespace rnt {

inline constexpr double kProbFloor = 1e-12;

struct LossResult {
  double loss = 0.0;
  // Gradient with respect to the logits (pt/nt) or the cosines (am).
  std::vector<double> grad;
  // The probability argument of the log hit kProbFloor.
  bool clamped = false;
};

// Positive training: -log p[label]; d/dlogits = p - onehot(label).
LossResult pt_loss(std::span<const double> probs, ClassId label);

// Negative training on one complementary label: -log(1 - p[c]), with 1 - p[c]
// taken as the sum of the other probabilities.
// d/dlogit_i = p[c] * (delta_ic - p_i) / (1 - p[c]).
LossResult nt_loss(std::span<const double> probs, ClassId complementary);

// Mean of nt_loss over several complementary labels.
LossResult nt_loss(std::span<const double> probs, std::span<const ClassId> complementary);

struct ComplementarySample {
  ClassId original_label = 0;
  std::vector<ClassId> complementary_labels;
};

// `count` distinct labels drawn uniformly without replacement from
// {0..K-1} \ {label}.
ComplementarySample sample_complementary(ClassId label, int num_classes, int count, Rng& rng);

// Additive-margin softmax over cosines:
//   -log( e^{s(cos_y - m)} / (e^{s(cos_y - m)} + sum_{j != y} e^{s cos_j}) )
// Gradient is with respect to the cosines.
inline constexpr double kAmScale = 30.0;
inline constexpr double kAmMargin = 0.35;
LossResult am_loss(std::span<const double> cosines, ClassId label, double scale = kAmScale,
                   double margin = kAmMargin);

}  // namespace rnt
