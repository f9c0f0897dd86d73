#include "rnt/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "rnt/kernels.hpp"
#include "rnt/losses.hpp"
#include "rnt/rng.hpp"

namespace rnt {

const char* to_string(Variant v) {
  switch (v) {
    case Variant::kRnt: return "rnt";
    case Variant::kRntPure: return "rnt_pure";
    case Variant::kRntPtConf: return "rnt_ptconf";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  if (name == "rnt") return Variant::kRnt;
  if (name == "rnt_pure") return Variant::kRntPure;
  if (name == "rnt_ptconf") return Variant::kRntPtConf;
  throw ConfigError("variant: unknown variant '" + std::string(name) + "'");
}

void PipelineConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (pt_epochs < 1) fail("pt_epochs: must be >= 1");
  if (nt_epochs < 1) fail("nt_epochs: must be >= 1");
  if (selnt_epochs < 0) fail("selnt_epochs: must be >= 0");
  if (!(lr > 0.0) || !std::isfinite(lr)) fail("lr: must be a positive finite number");
  if (nt_lr && (!(*nt_lr > 0.0) || !std::isfinite(*nt_lr))) fail("nt_lr: must be a positive finite number");
  if (batch < 1) fail("batch: must be >= 1");
  if (nt_negatives < 0) fail("nt_negatives: must be >= 0");
  if (!(d_f > 0.0 && d_f < 1.0)) fail("d_f: must lie in (0,1)");
  if (n_prototypes < 1) fail("n_prototypes: must be >= 1");
  if (proportions < 1) fail("proportions: must be >= 1");
  if (variant == Variant::kRntPtConf && !(ptconf_threshold > 0.0 && ptconf_threshold < 1.0))
    fail("ptconf_threshold: must lie in (0,1)");
  if (rounds < 1) fail("rounds: must be >= 1");
  if (embed_dim < 1) fail("embed_dim: must be >= 1");
  if (!(init_std > 0.0)) fail("init_std: must be > 0");
  if (vectorizer.n_max < 1) fail("vectorizer.n_max: must be >= 1");
  if (vectorizer.buckets_log2 < 10 || vectorizer.buckets_log2 > 30)
    fail("vectorizer.buckets_log2: must lie in [10,30]");
}

std::vector<Example> make_examples(std::span<const Document> docs, const VectorizerConfig& vectorizer) {
  std::vector<std::string> texts;
  texts.reserve(docs.size());
  for (const auto& d : docs) texts.push_back(d.text);
  auto xs = parallel::featurize_all(texts, vectorizer);
  std::vector<Example> out(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (!docs[i].gold_label) throw DataError("make_examples: document " + std::to_string(docs[i].id) + " has no label");
    out[i] = {docs[i].id, std::move(xs[i]), *docs[i].gold_label, docs[i].is_noisy};
  }
  return out;
}

namespace {

std::vector<Prediction> predict(const Classifier& clf, std::span<const Example> items) {
  std::vector<SparseVector> xs;
  xs.reserve(items.size());
  for (const auto& e : items) xs.push_back(e.x);
  return parallel::predict_all(clf, xs);
}

ClassifierConfig classifier_config(int num_classes, const PipelineConfig& cfg, std::string_view stage) {
  ClassifierConfig cc;
  cc.buckets_log2 = cfg.vectorizer.buckets_log2;
  cc.embed_dim = cfg.embed_dim;
  cc.num_classes = num_classes;
  cc.init_std = cfg.init_std;
  cc.init_seed = derive_seed(cfg.seed, std::string(stage) + "_init");
  return cc;
}

void check_labels(std::span<const Example> items, int num_classes, const char* what) {
  for (const auto& e : items)
    if (e.label < 0 || e.label >= num_classes)
      throw DataError(std::string(what) + ": label out of range for document " + std::to_string(e.id));
}

EpochRecord evaluate(const Classifier& clf, std::span<const Example> items, int epoch,
                     const std::string& phase, const std::string& split) {
  EpochRecord r;
  r.epoch = epoch;
  r.phase = phase;
  r.split = split;
  const auto preds = predict(clf, items);
  std::vector<ClassId> p(items.size()), g(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    p[i] = preds[i].argmax();
    g[i] = items[i].label;
  }
  const Metrics m = metrics(p, g);
  r.accuracy = m.accuracy;
  r.macro_f1 = m.macro_f1;
  if (split == "train") {
    double sc = 0.0, sn = 0.0;
    std::size_t nc = 0, nn = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
      const double conf = preds[i].probs[static_cast<std::size_t>(items[i].label)];
      if (items[i].is_noisy) {
        sn += conf;
        ++nn;
      } else {
        sc += conf;
        ++nc;
      }
    }
    if (nc) r.mean_conf_clean = sc / static_cast<double>(nc);
    if (nn) r.mean_conf_noisy = sn / static_cast<double>(nn);
  }
  return r;
}

// Shared epoch bookkeeping: logs train/dev records and keeps the best-on-dev
// model (strictly better dev accuracy; earliest epoch wins ties).
class Tracker {
 public:
  Tracker(TrainOutcome& out, std::span<const Example> train, std::span<const Example> dev)
      : out_(out), train_(train), dev_(dev) {}

  void end_epoch(const Classifier& clf, int epoch, const std::string& phase, double loss,
                 std::size_t trained) {
    EpochRecord tr = evaluate(clf, train_, epoch, phase, "train");
    tr.loss = loss;
    tr.trained = trained;
    out_.log.push_back(tr);
    if (dev_.empty()) {
      out_.best = clf;
      out_.best_epoch = epoch;
      return;
    }
    EpochRecord dv = evaluate(clf, dev_, epoch, phase, "dev");
    out_.log.push_back(dv);
    if (dv.accuracy > out_.best_dev_accuracy) {
      out_.best_dev_accuracy = dv.accuracy;
      out_.best = clf;
      out_.best_epoch = epoch;
    }
  }

 private:
  TrainOutcome& out_;
  std::span<const Example> train_;
  std::span<const Example> dev_;
};

// One pass over `order` in mini-batches. `loss_fn(example, pred)` returns the
// per-example loss. Returns the mean loss.
template <typename LossFn>
double train_epoch(Classifier& clf, std::span<const Example> data, const std::vector<std::size_t>& order,
                   int batch, double lr, LossFn&& loss_fn) {
  Gradients grads(clf);
  double total = 0.0;
  for (std::size_t begin = 0; begin < order.size(); begin += static_cast<std::size_t>(batch)) {
    const std::size_t end = std::min(order.size(), begin + static_cast<std::size_t>(batch));
    const double scale = 1.0 / static_cast<double>(end - begin);
    grads.clear();
    for (std::size_t k = begin; k < end; ++k) {
      const Example& e = data[order[k]];
      const Prediction pred = forward(clf, e.x);
      const LossResult lr_ = loss_fn(e, pred);
      if (!std::isfinite(lr_.loss))
        throw DivergenceError("non-finite loss on document " + std::to_string(e.id));
      total += lr_.loss;
      backprop(clf, e.x, pred, lr_.grad, scale, grads);
    }
    sgd_step(clf, grads, lr);
  }
  return order.empty() ? 0.0 : total / static_cast<double>(order.size());
}

}  // namespace

TrainOutcome run_pt(std::span<const Example> labeled, std::span<const Example> dev, int num_classes,
                    const PipelineConfig& cfg, std::string_view stage) {
  cfg.validate();
  if (labeled.empty()) throw InvalidArgument("run_pt: empty labeled set");
  if (num_classes < 2) throw InvalidArgument("run_pt: need at least two classes");
  check_labels(labeled, num_classes, "run_pt");
  check_labels(dev, num_classes, "run_pt");
  std::vector<bool> present(static_cast<std::size_t>(num_classes), false);
  for (const auto& e : labeled) present[static_cast<std::size_t>(e.label)] = true;
  for (int c = 0; c < num_classes; ++c)
    if (!present[static_cast<std::size_t>(c)])
      throw DataError("run_pt: class " + std::to_string(c) + " has no labeled instance");

  Classifier clf(classifier_config(num_classes, cfg, stage));
  TrainOutcome out{clf, clf, 0, -1.0, {}};
  Tracker tracker(out, labeled, dev);
  Rng order_rng = make_rng(cfg.seed, std::string(stage) + "_order");
  std::vector<std::size_t> order(labeled.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 1; epoch <= cfg.pt_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), order_rng);
    const double loss = train_epoch(clf, labeled, order, cfg.batch, cfg.lr,
                                    [](const Example& e, const Prediction& p) { return pt_loss(p.probs, e.label); });
    tracker.end_epoch(clf, epoch, "pt", loss, order.size());
  }
  out.last = std::move(clf);
  return out;
}

TrainOutcome run_pt(const CorpusSplit& split, const PipelineConfig& cfg) {
  const auto labeled = make_examples(split.labeled, cfg.vectorizer);
  const auto dev = make_examples(split.dev, cfg.vectorizer);
  return run_pt(labeled, dev, split.num_classes, cfg);
}

TrainOutcome run_nt(std::span<const Example> data, std::span<const Example> dev, int num_classes,
                    const PipelineConfig& cfg, std::string_view stage) {
  cfg.validate();
  if (data.empty()) throw InvalidArgument("run_nt: empty training set");
  if (num_classes < 2) throw InvalidArgument("run_nt: need at least two classes");
  check_labels(data, num_classes, "run_nt");
  check_labels(dev, num_classes, "run_nt");
  const int negatives = cfg.nt_negatives == 0 ? num_classes - 1 : std::min(cfg.nt_negatives, num_classes - 1);
  const double lr = cfg.effective_nt_lr();

  Classifier clf(classifier_config(num_classes, cfg, stage));
  TrainOutcome out{clf, clf, 0, -1.0, {}};
  Tracker tracker(out, data, dev);
  Rng order_rng = make_rng(cfg.seed, std::string(stage) + "_order");
  Rng comp_rng = make_rng(cfg.seed, std::string(stage) + "_complementary");
  auto nt = [&](const Example& e, const Prediction& p) {
    const auto s = sample_complementary(e.label, num_classes, negatives, comp_rng);
    return nt_loss(p.probs, s.complementary_labels);
  };

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  int epoch = 0;
  for (int i = 0; i < cfg.nt_epochs; ++i) {
    std::shuffle(order.begin(), order.end(), order_rng);
    const double loss = train_epoch(clf, data, order, cfg.batch, lr, nt);
    tracker.end_epoch(clf, ++epoch, "nt", loss, order.size());
  }
  const double floor = 1.0 / static_cast<double>(num_classes);
  for (int i = 0; i < cfg.selnt_epochs; ++i) {
    const auto preds = predict(clf, data);
    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < data.size(); ++j)
      if (preds[j].probs[static_cast<std::size_t>(data[j].label)] > floor) kept.push_back(j);
    std::shuffle(kept.begin(), kept.end(), order_rng);
    const double loss = train_epoch(clf, data, kept, cfg.batch, lr, nt);
    tracker.end_epoch(clf, ++epoch, "selnt", loss, kept.size());
  }
  out.last = std::move(clf);
  return out;
}

Assignments pseudo_label(const Classifier& clf, std::span<const Document> unlabeled,
                         const VectorizerConfig& vectorizer) {
  std::vector<std::string> texts;
  texts.reserve(unlabeled.size());
  for (const auto& d : unlabeled) texts.push_back(d.text);
  const auto xs = parallel::featurize_all(texts, vectorizer);
  const auto preds = parallel::predict_all(clf, xs);
  Assignments out;
  for (std::size_t i = 0; i < unlabeled.size(); ++i)
    if (!out.emplace(unlabeled[i].id, preds[i].argmax()).second)
      throw DataError("pseudo_label: duplicate document id " + std::to_string(unlabeled[i].id));
  return out;
}

std::vector<DocId> filter_unlabeled(const RankedSet& ranked, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw InvalidArgument("filter_unlabeled: theta must lie in (0,1]");
  const auto k = static_cast<std::size_t>(std::llround(theta * static_cast<double>(ranked.size())));
  if (k == 0) throw InvalidArgument("filter_unlabeled: selection is empty (theta too small for n)");
  std::vector<DocId> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(ranked.entries[i].doc_id);
  return out;
}

EvidenceModel build_evidence(const Classifier& clf, std::span<const Example> labeled, int n_prototypes) {
  const auto preds = predict(clf, labeled);
  std::vector<ClassId> gold(labeled.size());
  for (std::size_t i = 0; i < labeled.size(); ++i) gold[i] = labeled[i].label;
  EvidenceModel ev;
  ev.num_classes = clf.num_classes();
  ev.prototypes = build_prototypes(preds, gold, ev.num_classes, n_prototypes);
  const auto features = parallel::features_all(preds, ev.prototypes, ev.num_classes);
  std::vector<LabeledFeatures> lf(labeled.size());
  for (std::size_t i = 0; i < labeled.size(); ++i) lf[i] = {gold[i], features[i]};
  ev.index = parallel::build_index(lf);
  return ev;
}

RankedSet rank_examples(const Classifier& clf, const EvidenceModel& evidence, std::span<const Example> items,
                        double d_f) {
  const auto preds = predict(clf, items);
  auto features = parallel::features_all(preds, evidence.prototypes, evidence.num_classes);
  std::vector<RankInput> inputs(items.size());
  for (std::size_t i = 0; i < items.size(); ++i)
    inputs[i] = {items[i].id, preds[i].argmax(), preds[i].max_prob(), std::move(features[i])};
  return rank(inputs, evidence.index, d_f);
}

std::vector<RankedLabel> join_gold(const RankedSet& ranked, std::span<const Example> gold) {
  std::map<DocId, const Example*> by_id;
  for (const auto& e : gold) by_id[e.id] = &e;
  std::vector<RankedLabel> out;
  out.reserve(ranked.size());
  for (const auto& r : ranked.entries) {
    auto it = by_id.find(r.doc_id);
    if (it == by_id.end()) throw DataError("join_gold: no gold label for document " + std::to_string(r.doc_id));
    out.push_back({r.doc_id, r.pseudo_label, it->second->label, it->second->is_noisy});
  }
  return out;
}

namespace {

void assert_disjoint(const CorpusSplit& split) {
  std::set<DocId> train;
  for (const auto& d : split.labeled) train.insert(d.id);
  for (const auto& d : split.unlabeled)
    if (!train.insert(d.id).second) throw DataError("duplicate training id " + std::to_string(d.id));
  std::set<DocId> dev;
  for (const auto& d : split.dev) {
    if (train.count(d.id)) throw DataError("dev document " + std::to_string(d.id) + " overlaps training data");
    dev.insert(d.id);
  }
  for (const auto& d : split.test)
    if (train.count(d.id) || dev.count(d.id))
      throw DataError("test document " + std::to_string(d.id) + " overlaps training or dev data");
}

std::string round_stage(const char* base, int round) {
  return round == 1 ? std::string(base) : std::string(base) + "_r" + std::to_string(round);
}

}  // namespace

RunArtifacts run_variant(const CorpusSplit& split, const PipelineConfig& cfg) {
  cfg.validate();
  assert_disjoint(split);
  const int K = split.num_classes;
  const auto labeled = make_examples(split.labeled, cfg.vectorizer);
  const auto dev = make_examples(split.dev, cfg.vectorizer);
  const auto test = make_examples(split.test, cfg.vectorizer);

  // Unlabeled examples carry a placeholder label until pseudo-labeling.
  std::vector<Example> pool(split.unlabeled.size());
  {
    std::vector<std::string> texts;
    for (const auto& d : split.unlabeled) texts.push_back(d.text);
    auto xs = parallel::featurize_all(texts, cfg.vectorizer);
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = {split.unlabeled[i].id, std::move(xs[i]), 0, false};
  }
  if (pool.empty()) throw DataError("run_variant: empty unlabeled set");

  RunArtifacts art;
  TrainOutcome pt = run_pt(labeled, dev, K, cfg);
  art.pt_model = pt.best;
  art.metrics_log = pt.log;

  const Classifier* current = &art.pt_model;
  for (int round = 1; round <= cfg.rounds; ++round) {
    const auto preds = predict(*current, pool);
    art.pseudo_labels.clear();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      pool[i].label = preds[i].argmax();
      art.pseudo_labels[pool[i].id] = pool[i].label;
    }

    art.ranked = {};
    art.ranked_dev = {};
    art.cutoff.reset();
    art.selected_ids.clear();
    switch (cfg.variant) {
      case Variant::kRnt: {
        const EvidenceModel ev = build_evidence(*current, labeled, cfg.n_prototypes);
        art.ranked = rank_examples(*current, ev, pool, cfg.d_f);
        if (dev.empty()) throw DataError("run_variant: the rnt variant needs a dev set for the cutoff");
        art.ranked_dev = rank_examples(*current, ev, dev, cfg.d_f);
        const auto curve = ranking_curve(join_gold(art.ranked_dev, dev), cfg.proportions);
        art.cutoff = select_cutoff(curve.accuracies());
        // An empty leading prefix still keeps the top proportion.
        art.theta = art.cutoff->prefix == 0 ? 1.0 / static_cast<double>(art.cutoff->proportion_accuracies.size())
                                            : art.cutoff->theta;
        art.selected_ids = filter_unlabeled(art.ranked, art.theta);
        break;
      }
      case Variant::kRntPure:
        art.theta = 1.0;
        for (const auto& e : pool) art.selected_ids.push_back(e.id);
        break;
      case Variant::kRntPtConf: {
        for (std::size_t i = 0; i < pool.size(); ++i)
          if (preds[i].max_prob() >= cfg.ptconf_threshold) art.selected_ids.push_back(pool[i].id);
        art.theta = static_cast<double>(art.selected_ids.size()) / static_cast<double>(pool.size());
        break;
      }
    }

    // Mixture: D_l with gold labels plus the selected pseudo-labeled D_u.
    // The noise flag of a pseudo-labeled instance is for logging only.
    std::set<DocId> chosen(art.selected_ids.begin(), art.selected_ids.end());
    std::vector<Example> mixture(labeled.begin(), labeled.end());
    for (const auto& e : pool) {
      if (!chosen.count(e.id)) continue;
      Example m = e;
      auto g = split.hidden_gold.find(e.id);
      m.is_noisy = g != split.hidden_gold.end() && g->second != e.label;
      mixture.push_back(std::move(m));
    }

    TrainOutcome nt = run_nt(mixture, dev, K, cfg, round_stage("nt", round));
    for (auto& rec : nt.log) art.metrics_log.push_back(std::move(rec));
    art.final_model = std::move(nt.best);
    current = &art.final_model;
  }

  if (!split.hidden_gold.empty()) {
    std::size_t ok = 0, n = 0;
    for (const auto& [id, label] : art.pseudo_labels) {
      auto g = split.hidden_gold.find(id);
      if (g == split.hidden_gold.end()) continue;
      ++n;
      ok += g->second == label;
    }
    if (n) art.pool_pseudo_accuracy = static_cast<double>(ok) / static_cast<double>(n);
    ok = n = 0;
    for (DocId id : art.selected_ids) {
      auto g = split.hidden_gold.find(id);
      if (g == split.hidden_gold.end()) continue;
      ++n;
      ok += g->second == art.pseudo_labels.at(id);
    }
    if (n) art.selected_pseudo_accuracy = static_cast<double>(ok) / static_cast<double>(n);
  }

  if (!test.empty()) {
    std::vector<ClassId> gold(test.size()), p_pt(test.size()), p_final(test.size());
    const auto pt_preds = predict(art.pt_model, test);
    const auto final_preds = predict(art.final_model, test);
    for (std::size_t i = 0; i < test.size(); ++i) {
      gold[i] = test[i].label;
      p_pt[i] = pt_preds[i].argmax();
      p_final[i] = final_preds[i].argmax();
      art.test_predictions[test[i].id] = p_final[i];
    }
    art.pt_test = metrics(p_pt, gold);
    art.final_test = metrics(p_final, gold);
  }
  return art;
}

}  // namespace rnt
