#include "rnt/losses.hpp"

#include <algorithm>
#include <cmath>

#include "rnt/model.hpp"

namespace rnt {

namespace {

void check_index(std::span<const double> probs, ClassId c, const char* who) {
  if (c < 0 || static_cast<std::size_t>(c) >= probs.size())
    throw InvalidArgument(std::string(who) + ": class index out of range");
}

}  // namespace

LossResult pt_loss(std::span<const double> probs, ClassId label) {
  check_index(probs, label, "pt_loss");
  LossResult r;
  double p = probs[static_cast<std::size_t>(label)];
  if (p < kProbFloor) {
    p = kProbFloor;
    r.clamped = true;
  }
  r.loss = -std::log(p);
  r.grad.assign(probs.begin(), probs.end());
  r.grad[static_cast<std::size_t>(label)] -= 1.0;
  return r;
}

LossResult nt_loss(std::span<const double> probs, ClassId complementary) {
  check_index(probs, complementary, "nt_loss");
  const auto c = static_cast<std::size_t>(complementary);
  LossResult r;
  double rest = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k)
    if (k != c) rest += probs[k];
  if (rest < kProbFloor) {
    rest = kProbFloor;
    r.clamped = true;
  }
  r.loss = -std::log(rest);
  const double factor = probs[c] / rest;
  r.grad.resize(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i)
    r.grad[i] = factor * ((i == c ? 1.0 : 0.0) - probs[i]);
  return r;
}

LossResult nt_loss(std::span<const double> probs, std::span<const ClassId> complementary) {
  if (complementary.empty()) throw InvalidArgument("nt_loss: no complementary labels");
  LossResult total;
  total.grad.assign(probs.size(), 0.0);
  const double w = 1.0 / static_cast<double>(complementary.size());
  for (ClassId c : complementary) {
    const LossResult one = nt_loss(probs, c);
    total.loss += w * one.loss;
    for (std::size_t i = 0; i < probs.size(); ++i) total.grad[i] += w * one.grad[i];
    total.clamped = total.clamped || one.clamped;
  }
  return total;
}

ComplementarySample sample_complementary(ClassId label, int num_classes, int count, Rng& rng) {
  if (num_classes < 2) throw InvalidArgument("sample_complementary: K must be >= 2");
  if (label < 0 || label >= num_classes)
    throw InvalidArgument("sample_complementary: label out of range");
  if (count < 1 || count > num_classes - 1)
    throw InvalidArgument("sample_complementary: count must lie in [1, K-1]");
  std::vector<ClassId> pool;
  pool.reserve(static_cast<std::size_t>(num_classes - 1));
  for (ClassId c = 0; c < num_classes; ++c)
    if (c != label) pool.push_back(c);
  // Partial Fisher-Yates: the first `count` slots are a uniform draw.
  for (int i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i), pool.size() - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[pick(rng)]);
  }
  pool.resize(static_cast<std::size_t>(count));
  return {label, std::move(pool)};
}

LossResult am_loss(std::span<const double> cosines, ClassId label, double scale, double margin) {
  check_index(cosines, label, "am_loss");
  if (!(scale > 0.0)) throw InvalidArgument("am_loss: scale must be > 0");
  if (!(margin >= 0.0)) throw InvalidArgument("am_loss: margin must be >= 0");
  const auto y = static_cast<std::size_t>(label);
  std::vector<double> z(cosines.size());
  for (std::size_t j = 0; j < cosines.size(); ++j)
    z[j] = scale * (cosines[j] - (j == y ? margin : 0.0));
  // log-sum-exp split as top + log1p(rest) so a saturated loss keeps its
  // relative precision.
  const auto m = static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin());
  const double top = z[m];
  std::vector<double> e(z.size());
  double rest = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    e[j] = j == m ? 1.0 : std::exp(z[j] - top);
    if (j != m) rest += e[j];
  }
  LossResult r;
  r.loss = (top - z[y]) + std::log1p(rest);
  const double denom = 1.0 + rest;
  r.grad.resize(cosines.size());
  for (std::size_t j = 0; j < cosines.size(); ++j) {
    // q_y - 1 written without cancellation when y is the top class.
    const double g = j != y ? e[j] / denom : (j == m ? -rest / denom : e[j] / denom - 1.0);
    r.grad[j] = scale * g;
  }
  return r;
}

}  // namespace rnt
