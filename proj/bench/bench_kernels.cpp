// Serial reference vs OpenMP kernels on a synthetic batch.

#include <benchmark/benchmark.h>

#include <random>

#include "rnt/kernels.hpp"
#include "rnt/rng.hpp"

namespace {

using namespace rnt;

struct Fixture {
  VectorizerConfig vcfg{2, 18, 0x5eed5eedULL};
  std::vector<std::string> texts;
  std::vector<SparseVector> xs;
  Classifier clf;
  std::vector<Prediction> preds;
  ClassPrototypes protos;
  std::vector<FeatureSet> features;
  std::vector<LabeledFeatures> labeled;
  FeatureIndex index;

  explicit Fixture(std::size_t n) {
    Rng rng(17);
    std::vector<std::string> vocab(5000);
    for (std::size_t i = 0; i < vocab.size(); ++i) vocab[i] = "w" + std::to_string(i);
    texts.resize(n);
    for (auto& t : texts)
      for (int k = 0; k < 30; ++k) t += vocab[rng() % vocab.size()] + " ";
    xs = serial::featurize_all(texts, vcfg);
    ClassifierConfig c;
    c.buckets_log2 = vcfg.buckets_log2;
    c.num_classes = 4;
    c.init_std = 0.1;
    c.init_seed = 3;
    clf = Classifier(c);
    preds = serial::predict_all(clf, xs);
    protos.by_class.resize(4);
    for (std::size_t i = 0; i < 20; ++i) protos.by_class[i % 4].push_back(*normalized_embedding(preds[i]));
    features = serial::features_all(preds, protos, 4);
    for (std::size_t i = 0; i < n; ++i) labeled.push_back({static_cast<ClassId>(i % 4), features[i]});
    index = serial::build_index(labeled);
  }
};

const Fixture& fixture() {
  static const Fixture f(4000);
  return f;
}

template <bool Parallel>
void BM_Featurize(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(Parallel ? parallel::featurize_all(f.texts, f.vcfg) : serial::featurize_all(f.texts, f.vcfg));
}

template <bool Parallel>
void BM_Predict(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(Parallel ? parallel::predict_all(f.clf, f.xs) : serial::predict_all(f.clf, f.xs));
}

template <bool Parallel>
void BM_Features(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(Parallel ? parallel::features_all(f.preds, f.protos, 4)
                                      : serial::features_all(f.preds, f.protos, 4));
}

template <bool Parallel>
void BM_Masses(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(Parallel ? parallel::masses_all(f.features, f.index, 0.2)
                                      : serial::masses_all(f.features, f.index, 0.2));
}

template <bool Parallel>
void BM_Index(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(Parallel ? parallel::build_index(f.labeled) : serial::build_index(f.labeled));
}

BENCHMARK(BM_Featurize<false>)->Name("featurize/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Featurize<true>)->Name("featurize/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Predict<false>)->Name("predict/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Predict<true>)->Name("predict/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Features<false>)->Name("features/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Features<true>)->Name("features/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Masses<false>)->Name("masses/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Masses<true>)->Name("masses/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Index<false>)->Name("index/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Index<true>)->Name("index/parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
