#include "rnt/eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "rnt/kernels.hpp"

namespace rnt {

Metrics metrics(std::span<const ClassId> preds, std::span<const ClassId> gold) {
  if (preds.size() != gold.size()) throw InvalidArgument("metrics: size mismatch");
  if (gold.empty()) throw InvalidArgument("metrics: empty input");
  std::map<ClassId, std::array<std::size_t, 3>> counts;  // tp, fp, fn
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (preds[i] == gold[i]) {
      ++correct;
      ++counts[gold[i]][0];
    } else {
      ++counts[preds[i]][1];
      ++counts[gold[i]][2];
    }
  }
  double f1_sum = 0.0;
  for (const auto& [cls, c] : counts) {
    const double denom = static_cast<double>(2 * c[0] + c[1] + c[2]);
    f1_sum += denom > 0.0 ? 2.0 * static_cast<double>(c[0]) / denom : 0.0;
  }
  return {static_cast<double>(correct) / static_cast<double>(gold.size()),
          f1_sum / static_cast<double>(counts.size())};
}

Metrics metrics(const Assignments& preds, const Assignments& gold) {
  if (preds.size() != gold.size()) throw InvalidArgument("metrics: id sets differ");
  std::vector<ClassId> p, g;
  p.reserve(gold.size());
  g.reserve(gold.size());
  auto pi = preds.begin();
  for (const auto& [id, label] : gold) {
    if (pi->first != id) throw InvalidArgument("metrics: id sets differ");
    p.push_back(pi->second);
    g.push_back(label);
    ++pi;
  }
  return metrics(p, g);
}

std::vector<double> RankingCurve::accuracies() const {
  std::vector<double> out;
  out.reserve(proportions.size());
  for (const auto& p : proportions) out.push_back(p.accuracy);
  return out;
}

RankingCurve ranking_curve(std::span<const RankedLabel> ranked, int proportions) {
  if (proportions < 1) throw InvalidArgument("ranking_curve: proportions must be >= 1");
  RankingCurve curve;
  const std::size_t n = ranked.size();
  if (n == 0) return curve;
  const std::size_t count = std::min(static_cast<std::size_t>(proportions), n);
  const std::size_t base = n / count;
  std::size_t begin = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t end = k + 1 == count ? n : begin + base;
    std::vector<ClassId> p, g;
    for (std::size_t i = begin; i < end; ++i) {
      p.push_back(ranked[i].pseudo_label);
      g.push_back(ranked[i].gold_label);
    }
    const Metrics m = metrics(p, g);
    curve.proportions.push_back({k, end - begin, m.accuracy, m.macro_f1});
    begin = end;
  }
  return curve;
}

int histogram_bin(double confidence, int bins) {
  const int b = static_cast<int>(std::floor(confidence * bins));
  return std::clamp(b, 0, bins - 1);
}

ConfidenceHistogram confidence_histogram(std::span<const ConfidenceSample> samples, int bins) {
  if (bins < 1) throw InvalidArgument("confidence_histogram: bins must be >= 1");
  ConfidenceHistogram h;
  h.bins = bins;
  h.clean.assign(static_cast<std::size_t>(bins), 0);
  h.noisy.assign(static_cast<std::size_t>(bins), 0);
  double sum_clean = 0.0, sum_noisy = 0.0;
  std::size_t n_clean = 0, n_noisy = 0;
  for (const auto& s : samples) {
    const auto b = static_cast<std::size_t>(histogram_bin(s.confidence, bins));
    if (s.noisy) {
      ++h.noisy[b];
      sum_noisy += s.confidence;
      ++n_noisy;
    } else {
      ++h.clean[b];
      sum_clean += s.confidence;
      ++n_clean;
    }
  }
  h.mean_clean = n_clean ? sum_clean / static_cast<double>(n_clean) : 0.0;
  h.mean_noisy = n_noisy ? sum_noisy / static_cast<double>(n_noisy) : 0.0;
  return h;
}

ConfidenceHistogram confidence_histogram(const Classifier& clf, std::span<const Example> examples,
                                         int bins) {
  std::vector<SparseVector> xs;
  xs.reserve(examples.size());
  for (const auto& e : examples) xs.push_back(e.x);
  const auto preds = parallel::predict_all(clf, xs);
  std::vector<ConfidenceSample> samples(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i)
    samples[i] = {preds[i].probs[static_cast<std::size_t>(examples[i].label)], examples[i].is_noisy};
  return confidence_histogram(samples, bins);
}

DenoiseReport denoise_eval(std::span<const RankedLabel> ranked, double selection_fraction) {
  if (!(selection_fraction > 0.0 && selection_fraction <= 1.0))
    throw InvalidArgument("denoise_eval: selection_fraction must lie in (0,1]");
  DenoiseReport r;
  r.selection_fraction = selection_fraction;
  std::size_t clean = 0, clean_ok = 0, noisy = 0, noisy_ok = 0;
  for (const auto& e : ranked) {
    const bool ok = e.pseudo_label == e.gold_label;
    if (e.is_noisy) {
      ++noisy;
      noisy_ok += ok;
    } else {
      ++clean;
      clean_ok += ok;
    }
  }
  r.clean_acc = clean ? static_cast<double>(clean_ok) / static_cast<double>(clean) : 0.0;
  r.noisy_acc = noisy ? static_cast<double>(noisy_ok) / static_cast<double>(noisy) : 0.0;
  const auto top = static_cast<std::size_t>(
      std::llround(selection_fraction * static_cast<double>(ranked.size())));
  std::size_t top_clean = 0;
  for (std::size_t i = 0; i < top; ++i) top_clean += !ranked[i].is_noisy;
  r.denoising_accuracy = top ? static_cast<double>(top_clean) / static_cast<double>(top) : 0.0;
  return r;
}

}  // namespace rnt
