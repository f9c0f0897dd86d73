#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "rnt/common.hpp"
#include "rnt/featurize.hpp"

namespace rnt {

// A vectorized training or evaluation instance.
struct Example {
  DocId id = 0;
  SparseVector x;
  ClassId label = 0;
  bool is_noisy = false;
};

struct ClassifierConfig {
  int buckets_log2 = 18;
  int embed_dim = 64;
  int num_classes = 2;
  double init_std = 0.02;
  std::uint64_t init_seed = 0;

  friend bool operator==(const ClassifierConfig&, const ClassifierConfig&) = default;
};

// Sparse input -> dense embedding (2^B x d) -> linear head (d x K) + bias.
class Classifier {
 public:
  // Gaussian N(0, init_std^2) weights drawn in order (embedding rows, then
  // head) from init_seed; zero bias.
  // Empty placeholder with no parameters.
  Classifier() = default;
  explicit Classifier(const ClassifierConfig& config);
  static Classifier zeros(const ClassifierConfig& config);

  const ClassifierConfig& config() const { return config_; }
  int dim() const { return config_.embed_dim; }
  int num_classes() const { return config_.num_classes; }
  std::size_t num_buckets() const { return std::size_t{1} << config_.buckets_log2; }

  std::span<const double> embed_row(std::uint32_t row) const {
    return {embed_.data() + static_cast<std::size_t>(row) * dim(), static_cast<std::size_t>(dim())};
  }
  std::span<double> embed_row(std::uint32_t row) {
    return {embed_.data() + static_cast<std::size_t>(row) * dim(), static_cast<std::size_t>(dim())};
  }
  // Row-major d x K.
  std::span<const double> head() const { return head_; }
  std::span<double> head() { return head_; }
  std::span<const double> bias() const { return bias_; }
  std::span<double> bias() { return bias_; }

  friend bool operator==(const Classifier&, const Classifier&) = default;

 private:
  struct ZeroTag {};
  Classifier(const ClassifierConfig& config, ZeroTag);

  ClassifierConfig config_;
  std::vector<double> embed_;
  std::vector<double> head_;
  std::vector<double> bias_;
};

struct Prediction {
  std::vector<double> embedding;
  std::vector<double> logits;
  std::vector<double> probs;

  // Index of the largest probability; ties go to the lower class.
  int argmax() const;
  double max_prob() const;
};

std::vector<double> softmax(std::span<const double> logits);

Prediction forward(const Classifier& clf, const SparseVector& x);

// Unit-length copy of the embedding, or nullopt for a zero embedding (a
// degenerate instance that receives vacuous semantic evidence).
std::optional<std::vector<double>> normalized_embedding(const Prediction& pred);

// Accumulated parameter gradients; embedding rows are stored sparsely.
class Gradients {
 public:
  Gradients(int embed_dim, int num_classes);
  explicit Gradients(const Classifier& clf) : Gradients(clf.dim(), clf.num_classes()) {}

  void clear();
  // Zero-initialized on first access. The span is invalidated by the next
  // call that touches a new row.
  std::span<double> embed_row(std::uint32_t row);
  const std::vector<std::uint32_t>& rows() const { return rows_; }
  std::span<const double> row_values(std::size_t slot) const {
    return {values_.data() + slot * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  std::span<double> head() { return head_; }
  std::span<const double> head() const { return head_; }
  std::span<double> bias() { return bias_; }
  std::span<const double> bias() const { return bias_; }

 private:
  int dim_;
  std::unordered_map<std::uint32_t, std::size_t> slot_;
  std::vector<std::uint32_t> rows_;
  std::vector<double> values_;
  std::vector<double> head_;
  std::vector<double> bias_;
};

// Adds scale * d(loss)/d(params) for one example given d(loss)/d(logits).
void backprop(const Classifier& clf, const SparseVector& x, const Prediction& pred,
              std::span<const double> dlogits, double scale, Gradients& grads);

// params -= lr * grads. Throws DivergenceError on non-finite gradients or
// updated parameters.
void sgd_step(Classifier& clf, const Gradients& grads, double lr);

// Binary checkpoint (little-endian, versioned). Embedding rows that still
// equal their seeded initialization are omitted and regenerated on load.
void save_checkpoint(const Classifier& clf, const std::filesystem::path& path);
Classifier load_checkpoint(const std::filesystem::path& path);

}  // namespace rnt
