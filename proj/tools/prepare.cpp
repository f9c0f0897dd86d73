#include <algorithm>
#include <iostream>

#include "commands.hpp"
#include "rnt/io.hpp"

namespace rnt::cli {

namespace {

CorpusFormat format_for(const std::string& explicit_format, const std::filesystem::path& path) {
  if (!explicit_format.empty()) return parse_format(explicit_format);
  const auto ext = path.extension().string();
  if (ext == ".csv") return CorpusFormat::kCsv;
  if (ext == ".jsonl" || ext == ".json") return CorpusFormat::kJsonl;
  if (ext == ".tsv" || ext == ".txt") return CorpusFormat::kTsv;
  throw InvalidArgument("cannot infer the format of " + path.string() + "; pass --format");
}

}  // namespace

int cmd_prepare(const PrepareArgs& a) {
  if (!a.test_file.empty() && a.test_fraction > 0.0)
    throw InvalidArgument("--test-file and --test-fraction are mutually exclusive");
  const std::filesystem::path out = a.out;
  io::require_file(a.input);
  LabelMap labels;
  std::vector<Document> docs = load_corpus(a.input, format_for(a.format, a.input), labels, 0);
  std::vector<Document> external_test;
  if (!a.test_file.empty()) {
    io::require_file(a.test_file);
    external_test = load_corpus(a.test_file, format_for(a.test_format, a.test_file), labels,
                                static_cast<DocId>(docs.size()));
  }
  const int K = labels.size();
  if (K < 2) throw DataError("corpus has fewer than two classes");

  CorpusSplit s = split(docs, {a.labeled_fraction, a.dev_fraction, a.test_fraction}, K, a.seed);
  if (!a.test_file.empty()) s.test = std::move(external_test);

  s.labeled = inject_symmetric_noise(s.labeled, a.noise_rate, K, a.seed);
  const auto flipped = std::count_if(s.labeled.begin(), s.labeled.end(), [](const Document& d) { return d.is_noisy; });
  s.dev = perturb_documents(s.dev, a.perturb_dev_rate, a.perturb_word_rate, a.seed);
  const auto perturbed = std::count_if(s.dev.begin(), s.dev.end(), [](const Document& d) { return d.is_noisy; });

  write_label_map(out / "labels.json", labels);
  write_documents_jsonl(out / "labeled.jsonl", s.labeled, labels);
  write_documents_jsonl(out / "unlabeled.jsonl", s.unlabeled, labels);
  write_documents_jsonl(out / "dev.jsonl", s.dev, labels);
  write_documents_jsonl(out / "test.jsonl", s.test, labels);
  write_hidden_gold(out / "hidden_gold.jsonl", s.hidden_gold, labels);

  nlohmann::json inputs = {{"input", {{"path", a.input}, {"digest", io::file_digest(a.input)}}}};
  if (!a.test_file.empty()) inputs["test_file"] = {{"path", a.test_file}, {"digest", io::file_digest(a.test_file)}};
  nlohmann::json outputs;
  for (const char* name : {"labels.json", "labeled.jsonl", "unlabeled.jsonl", "dev.jsonl", "test.jsonl",
                           "hidden_gold.jsonl"})
    outputs[name] = io::file_digest(out / name);
  const nlohmann::json manifest = {
      {"command", "prepare"},
      {"version", kVersion},
      {"created_at", utc_now()},
      {"seed", a.seed},
      {"parameters",
       {{"labeled_fraction", a.labeled_fraction},
        {"dev_fraction", a.dev_fraction},
        {"test_fraction", a.test_fraction},
        {"noise_rate", a.noise_rate},
        {"perturb_dev_rate", a.perturb_dev_rate},
        {"perturb_word_rate", a.perturb_word_rate}}},
      {"inputs", inputs},
      {"num_classes", K},
      {"counts",
       {{"labeled", s.labeled.size()},
        {"unlabeled", s.unlabeled.size()},
        {"dev", s.dev.size()},
        {"test", s.test.size()},
        {"flipped", flipped},
        {"perturbed_dev", perturbed}}},
      {"outputs", outputs},
  };
  write_json(out / "manifest.json", manifest);
  std::cerr << "prepared " << s.labeled.size() << " labeled (" << flipped << " flipped), " << s.unlabeled.size()
            << " unlabeled, " << s.dev.size() << " dev, " << s.test.size() << " test -> " << out.string() << "\n";
  return 0;
}

}  // namespace rnt::cli
