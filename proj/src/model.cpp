#include "rnt/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include "rnt/common.hpp"
#include "rnt/io.hpp"
#include "rnt/rng.hpp"

namespace rnt {

namespace {

void validate(const ClassifierConfig& c) {
  if (c.num_classes < 2) throw InvalidArgument("classifier: num_classes must be >= 2");
  if (c.embed_dim < 2) throw InvalidArgument("classifier: embed_dim must be >= 2");
  if (c.buckets_log2 < 10 || c.buckets_log2 > 30)
    throw InvalidArgument("classifier: buckets_log2 must lie in [10, 30]");
  if (!(c.init_std >= 0.0)) throw InvalidArgument("classifier: init_std must be >= 0");
}

}  // namespace

Classifier::Classifier(const ClassifierConfig& config, ZeroTag) : config_(config) {
  validate(config_);
  embed_.assign(num_buckets() * static_cast<std::size_t>(dim()), 0.0);
  head_.assign(static_cast<std::size_t>(dim() * num_classes()), 0.0);
  bias_.assign(static_cast<std::size_t>(num_classes()), 0.0);
}

Classifier::Classifier(const ClassifierConfig& config) : Classifier(config, ZeroTag{}) {
  if (config_.init_std == 0.0) return;
  Rng rng(config_.init_seed);
  std::normal_distribution<double> normal(0.0, config_.init_std);
  for (auto& w : embed_) w = normal(rng);
  for (auto& w : head_) w = normal(rng);
}

Classifier Classifier::zeros(const ClassifierConfig& config) {
  return Classifier(config, ZeroTag{});
}

int Prediction::argmax() const {
  return static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

double Prediction::max_prob() const { return *std::max_element(probs.begin(), probs.end()); }

std::vector<double> softmax(std::span<const double> logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    p[k] = std::exp(logits[k] - top);
    sum += p[k];
  }
  for (auto& v : p) v /= sum;
  return p;
}

Prediction forward(const Classifier& clf, const SparseVector& x) {
  const auto d = static_cast<std::size_t>(clf.dim());
  const auto K = static_cast<std::size_t>(clf.num_classes());
  Prediction out;
  out.embedding.assign(d, 0.0);
  for (const auto& [bucket, w] : x.entries) {
    if (bucket >= clf.num_buckets()) throw InvalidArgument("forward: bucket index out of range");
    const auto row = clf.embed_row(bucket);
    for (std::size_t i = 0; i < d; ++i) out.embedding[i] += w * row[i];
  }
  const auto head = clf.head();
  out.logits.assign(clf.bias().begin(), clf.bias().end());
  for (std::size_t i = 0; i < d; ++i) {
    const double e = out.embedding[i];
    for (std::size_t k = 0; k < K; ++k) out.logits[k] += e * head[i * K + k];
  }
  out.probs = softmax(out.logits);
  return out;
}

std::optional<std::vector<double>> normalized_embedding(const Prediction& pred) {
  double s = 0.0;
  for (double v : pred.embedding) s += v * v;
  const double norm = std::sqrt(s);
  if (!(norm > 0.0)) return std::nullopt;
  std::vector<double> u(pred.embedding);
  for (auto& v : u) v /= norm;
  return u;
}

Gradients::Gradients(int embed_dim, int num_classes)
    : dim_(embed_dim),
      head_(static_cast<std::size_t>(embed_dim * num_classes), 0.0),
      bias_(static_cast<std::size_t>(num_classes), 0.0) {}

void Gradients::clear() {
  slot_.clear();
  rows_.clear();
  values_.clear();
  std::fill(head_.begin(), head_.end(), 0.0);
  std::fill(bias_.begin(), bias_.end(), 0.0);
}

std::span<double> Gradients::embed_row(std::uint32_t row) {
  auto [it, inserted] = slot_.try_emplace(row, rows_.size());
  if (inserted) {
    rows_.push_back(row);
    values_.resize(values_.size() + static_cast<std::size_t>(dim_), 0.0);
  }
  return {values_.data() + it->second * static_cast<std::size_t>(dim_),
          static_cast<std::size_t>(dim_)};
}

void backprop(const Classifier& clf, const SparseVector& x, const Prediction& pred,
              std::span<const double> dlogits, double scale, Gradients& grads) {
  const auto d = static_cast<std::size_t>(clf.dim());
  const auto K = static_cast<std::size_t>(clf.num_classes());
  const auto head = clf.head();
  auto ghead = grads.head();
  auto gbias = grads.bias();
  std::vector<double> dembed(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    const double e = pred.embedding[i];
    double acc = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      ghead[i * K + k] += scale * e * dlogits[k];
      acc += head[i * K + k] * dlogits[k];
    }
    dembed[i] = acc;
  }
  for (std::size_t k = 0; k < K; ++k) gbias[k] += scale * dlogits[k];
  for (const auto& [bucket, w] : x.entries) {
    auto row = grads.embed_row(bucket);
    const double f = scale * w;
    for (std::size_t i = 0; i < d; ++i) row[i] += f * dembed[i];
  }
}

namespace {

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw DivergenceError(std::string("non-finite ") + what);
}

}  // namespace

void sgd_step(Classifier& clf, const Gradients& grads, double lr) {
  check_finite(grads.head(), "head gradient");
  check_finite(grads.bias(), "bias gradient");
  for (std::size_t s = 0; s < grads.rows().size(); ++s) check_finite(grads.row_values(s), "embedding gradient");
  if (lr == 0.0) return;

  auto head = clf.head();
  const auto ghead = grads.head();
  for (std::size_t i = 0; i < head.size(); ++i) head[i] -= lr * ghead[i];
  auto bias = clf.bias();
  const auto gbias = grads.bias();
  for (std::size_t k = 0; k < bias.size(); ++k) bias[k] -= lr * gbias[k];
  for (std::size_t s = 0; s < grads.rows().size(); ++s) {
    auto row = clf.embed_row(grads.rows()[s]);
    const auto g = grads.row_values(s);
    for (std::size_t i = 0; i < row.size(); ++i) row[i] -= lr * g[i];
    check_finite(row, "embedding parameter");
  }
  check_finite(head, "head parameter");
  check_finite(bias, "bias parameter");
}

namespace {

constexpr char kMagic[8] = {'R', 'N', 'T', 'C', 'K', 'P', 'T', '\0'};
constexpr std::uint32_t kCheckpointVersion = 1;

template <typename T>
void put(std::string& out, const T& v) {
  out.append(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(const std::string& in, std::size_t& pos, const std::string& path) {
  if (pos + sizeof(T) > in.size()) throw DataError(path + ": truncated checkpoint");
  T v;
  std::memcpy(&v, in.data() + pos, sizeof v);
  pos += sizeof v;
  return v;
}

}  // namespace

void save_checkpoint(const Classifier& clf, const std::filesystem::path& path) {
  const auto& c = clf.config();
  const Classifier init(c);
  std::vector<std::uint32_t> changed;
  for (std::uint32_t r = 0; r < clf.num_buckets(); ++r) {
    const auto a = clf.embed_row(r);
    const auto b = init.embed_row(r);
    if (std::memcmp(a.data(), b.data(), a.size_bytes()) != 0) changed.push_back(r);
  }
  std::string out;
  out.append(kMagic, sizeof kMagic);
  put(out, kCheckpointVersion);
  put(out, static_cast<std::int32_t>(c.buckets_log2));
  put(out, static_cast<std::int32_t>(c.embed_dim));
  put(out, static_cast<std::int32_t>(c.num_classes));
  put(out, c.init_std);
  put(out, c.init_seed);
  put(out, static_cast<std::uint64_t>(changed.size()));
  for (auto r : changed) {
    put(out, r);
    for (double w : clf.embed_row(r)) put(out, w);
  }
  for (double w : clf.head()) put(out, w);
  for (double w : clf.bias()) put(out, w);
  io::write_file(path, out);
}

Classifier load_checkpoint(const std::filesystem::path& path) {
  const std::string in = io::read_file(path);
  const std::string name = path.string();
  if (in.size() < sizeof kMagic || std::memcmp(in.data(), kMagic, sizeof kMagic) != 0)
    throw DataError(name + ": not a checkpoint");
  std::size_t pos = sizeof kMagic;
  const auto version = get<std::uint32_t>(in, pos, name);
  if (version != kCheckpointVersion)
    throw DataError(name + ": unsupported checkpoint version " + std::to_string(version));
  ClassifierConfig c;
  c.buckets_log2 = get<std::int32_t>(in, pos, name);
  c.embed_dim = get<std::int32_t>(in, pos, name);
  c.num_classes = get<std::int32_t>(in, pos, name);
  c.init_std = get<double>(in, pos, name);
  c.init_seed = get<std::uint64_t>(in, pos, name);
  Classifier clf(c);
  const auto rows = get<std::uint64_t>(in, pos, name);
  for (std::uint64_t k = 0; k < rows; ++k) {
    const auto r = get<std::uint32_t>(in, pos, name);
    if (r >= clf.num_buckets()) throw DataError(name + ": row index out of range");
    for (auto& w : clf.embed_row(r)) w = get<double>(in, pos, name);
  }
  for (auto& w : clf.head()) w = get<double>(in, pos, name);
  for (auto& w : clf.bias()) w = get<double>(in, pos, name);
  if (pos != in.size()) throw DataError(name + ": trailing bytes in checkpoint");
  return clf;
}

}  // namespace rnt
