#include <iostream>

#include "commands.hpp"
#include "rnt/artifacts.hpp"
#include "rnt/config.hpp"
#include "rnt/io.hpp"
#include "rnt/kernels.hpp"
#include "rnt/pipeline.hpp"

namespace rnt::cli {

int cmd_rank(const RankArgs& a) {
  for (const auto& f : {a.model, a.labeled, a.input, a.labels}) io::require_file(f);
  PipelineConfig cfg;
  if (!a.config.empty()) cfg = load_config(a.config);
  cfg.d_f = a.d_f;
  cfg.n_prototypes = a.n_prototypes;
  cfg.validate();

  const LabelMap labels = read_label_map(a.labels);
  const Classifier clf = load_checkpoint(a.model);
  if (clf.config().buckets_log2 != cfg.vectorizer.buckets_log2)
    throw ConfigError("vectorizer.buckets_log2: does not match the checkpoint (" +
                      std::to_string(clf.config().buckets_log2) + ")");
  if (clf.num_classes() != labels.size()) throw DataError("checkpoint and labels.json disagree on the class count");

  const auto labeled = make_examples(read_documents_jsonl(a.labeled, labels), cfg.vectorizer);
  const auto docs = read_documents_jsonl(a.input, labels);
  std::vector<std::string> texts;
  for (const auto& d : docs) texts.push_back(d.text);
  auto xs = parallel::featurize_all(texts, cfg.vectorizer);
  std::vector<Example> items(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) items[i] = {docs[i].id, std::move(xs[i]), 0, docs[i].is_noisy};

  const EvidenceModel ev = build_evidence(clf, labeled, cfg.n_prototypes);
  RankedSet ranked = rank_examples(clf, ev, items, cfg.d_f);
  // A label already present in the input file is the pseudo-label to report.
  std::map<DocId, ClassId> given;
  for (const auto& d : docs)
    if (d.gold_label) given[d.id] = *d.gold_label;
  for (auto& e : ranked.entries)
    if (auto it = given.find(e.doc_id); it != given.end()) e.pseudo_label = it->second;
  write_ranked_csv(a.out, ranked, labels);

  if (!a.features_out.empty() || !a.index_out.empty()) {
    std::vector<SparseVector> vs;
    for (const auto& e : items) vs.push_back(e.x);
    const auto preds = parallel::predict_all(clf, vs);
    if (!a.features_out.empty()) {
      const auto feats = parallel::features_all(preds, ev.prototypes, ev.num_classes);
      std::vector<DocId> ids;
      for (const auto& e : items) ids.push_back(e.id);
      io::write_file(a.features_out, features_jsonl(ids, feats));
    }
    if (!a.index_out.empty()) io::write_file(a.index_out, index_jsonl(ev.index));
  }
  std::cerr << "ranked " << ranked.size() << " documents -> " << a.out << "\n";
  return 0;
}

}  // namespace rnt::cli
