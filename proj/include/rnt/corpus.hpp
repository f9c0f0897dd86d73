#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rnt/common.hpp"

namespace rnt {

struct Document {
  DocId id = 0;
  std::string text;
  std::optional<ClassId> gold_label;
  std::optional<ClassId> pseudo_label;
  // Set only by noise injection or text perturbation.
  bool is_noisy = false;
};

// Dense class vocabulary in first-seen order.
class LabelMap {
 public:
  LabelMap() = default;
  explicit LabelMap(std::vector<std::string> names);

  // Returns the index of `name`, appending it if unseen.
  ClassId intern(const std::string& name);
  std::optional<ClassId> find(const std::string& name) const;
  const std::string& name(ClassId id) const { return names_.at(static_cast<std::size_t>(id)); }
  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, ClassId> index_;
};

enum class CorpusFormat { kTsv, kCsv, kJsonl };

CorpusFormat parse_format(std::string_view name);

struct LoadedCorpus {
  std::vector<Document> docs;
  LabelMap labels;
};

// Reads raw records and assigns sequential ids starting at `first_id`.
// Labels extend `labels` in first-seen order.
std::vector<Document> load_corpus(const std::filesystem::path& path, CorpusFormat format,
                                  LabelMap& labels, DocId first_id = 0);
LoadedCorpus load_corpus(const std::filesystem::path& path, CorpusFormat format);

struct CorpusSplit {
  std::vector<Document> labeled;
  // Gold labels are stripped; they live in `hidden_gold` for evaluation only.
  std::vector<Document> unlabeled;
  std::vector<Document> dev;
  std::vector<Document> test;
  std::map<DocId, ClassId> hidden_gold;
  int num_classes = 0;
};

struct SplitFractions {
  double labeled = 0.1;
  double dev = 0.1;
  // Zero when the test set comes from a separate file.
  double test = 0.0;
};

// Class-stratified labeled sample (largest-remainder apportionment of
// round(labeled * n)), then uniform dev/test draws from the rest.
// Partitions are sorted by id.
CorpusSplit split(std::span<const Document> docs, const SplitFractions& fractions,
                  int num_classes, std::uint64_t seed);

// Flips exactly round(rate * n) labels, each to a uniform draw over the other
// K-1 classes, and marks those documents noisy.
std::vector<Document> inject_symmetric_noise(std::span<const Document> docs, double rate,
                                             int num_classes, std::uint64_t seed);

enum class Perturbation { kSwap, kDelete, kReplace, kInsert };

// Applies one character-level edit to a word of code points. Positions are
// code-point indices; `letter` is used by replace and insert.
void apply_perturbation(std::u32string& word, Perturbation kind, std::size_t pos,
                        char32_t letter = U'a');

// Perturbs round(word_rate * word_count) whitespace-delimited words, one random
// edit each. Whitespace runs are preserved verbatim.
std::string perturb_text(std::string_view text, double word_rate, std::uint64_t seed);

// Perturbs round(instance_rate * n) documents (marking them noisy) with
// per-document seeds derived from `seed` and the document id.
std::vector<Document> perturb_documents(std::span<const Document> docs, double instance_rate,
                                        double word_rate, std::uint64_t seed);

// Split-file JSONL: {"id", "text", "label", "is_noisy"}; label is the class
// name or null.
void write_documents_jsonl(const std::filesystem::path& path, std::span<const Document> docs,
                           const LabelMap& labels);
std::vector<Document> read_documents_jsonl(const std::filesystem::path& path,
                                           const LabelMap& labels);

void write_label_map(const std::filesystem::path& path, const LabelMap& labels);
LabelMap read_label_map(const std::filesystem::path& path);

// JSONL {"id", "label"} with class names.
void write_hidden_gold(const std::filesystem::path& path, const std::map<DocId, ClassId>& gold,
                       const LabelMap& labels);
std::map<DocId, ClassId> read_hidden_gold(const std::filesystem::path& path,
                                          const LabelMap& labels);

namespace utf8 {
std::u32string decode(std::string_view s);
std::string encode(std::u32string_view s);
bool is_space(char32_t c);
}  // namespace utf8

}  // namespace rnt
