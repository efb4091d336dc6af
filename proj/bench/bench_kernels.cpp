// Serial reference vs OpenMP path for each parallel kernel. The second
// benchmark argument selects the path: 0 serial, 1 parallel.

#include <benchmark/benchmark.h>

#include "stylebreach/breach_locator.hpp"
#include "stylebreach/corpus_io.hpp"
#include "stylebreach/features.hpp"
#include "stylebreach/learners/gbm.hpp"
#include "stylebreach/learners/svm.hpp"
#include "stylebreach/learners/tree.hpp"
#include "stylebreach/random.hpp"
#include "stylebreach/seg_metrics.hpp"

namespace sb = stylebreach;

namespace {

sb::Execution path(const benchmark::State& state) {
  return state.range(1) == 0 ? sb::Execution::Serial : sb::Execution::Parallel;
}

struct Dataset {
  Eigen::MatrixXd X;
  sb::Labels y;
};

Dataset noisy(Eigen::Index n, Eigen::Index d) {
  sb::Rng rng(1);
  Dataset ds{Eigen::MatrixXd(n, d), sb::Labels(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < d; ++c) ds.X(i, c) = rng.normal();
    ds.y[i] = ds.X(i, 0) + 0.5 * ds.X(i, 1) + 0.7 * rng.normal() > 0 ? 1 : 0;
  }
  return ds;
}

const std::vector<sb::LabeledDocument>& corpus() {
  static const auto c = [] {
    sb::SyntheticCorpusOptions options;
    options.documents = 64;
    options.authors = 8;
    options.source_sentences = 120;
    return sb::synthesize_corpus(options, sb::AuthorVocabulary::from_lexicon(sb::Lexicon::bundled()), 1);
  }();
  return c;
}

void BM_RbfKernel(benchmark::State& state) {
  const auto ds = noisy(state.range(0), 40);
  for (auto _ : state) benchmark::DoNotOptimize(sb::rbf_kernel(ds.X, ds.X, 0.025, path(state)));
}
BENCHMARK(BM_RbfKernel)->ArgsProduct({{256, 1024}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_GbmFit(benchmark::State& state) {
  const auto ds = noisy(state.range(0), 30);
  sb::GbmParams params;
  params.n_estimators = 20;
  for (auto _ : state) benchmark::DoNotOptimize(sb::GbmModel::fit(ds.X, ds.y, params, 1, path(state)));
}
BENCHMARK(BM_GbmFit)->ArgsProduct({{2000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_RandomForestFit(benchmark::State& state) {
  const auto ds = noisy(state.range(0), 20);
  sb::ForestParams params;
  for (auto _ : state) benchmark::DoNotOptimize(sb::RandomForestModel::fit(ds.X, ds.y, params, 1, path(state)));
}
BENCHMARK(BM_RandomForestFit)->ArgsProduct({{500}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_FeatureTable(benchmark::State& state) {
  std::vector<sb::Document> docs;
  for (const auto& item : corpus()) docs.push_back(item.doc);
  docs.resize(static_cast<std::size_t>(state.range(0)));
  const sb::FeatureExtractor extractor(sb::Lexicon::bundled());
  const auto groups = sb::default_stack_groups();
  for (auto _ : state) benchmark::DoNotOptimize(sb::extract_feature_table(extractor, docs, groups, path(state)));
}
BENCHMARK(BM_FeatureTable)->ArgsProduct({{16, 64}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_EvaluateCorpus(benchmark::State& state) {
  sb::Rng rng(2);
  std::vector<sb::EvalPair> pairs;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    const std::size_t n = rng.uniform_int(100, 400);
    pairs.push_back({std::to_string(i), sb::baseline_rnd(n, rng.next()), sb::baseline_eq(n, rng.next())});
  }
  for (auto _ : state) benchmark::DoNotOptimize(sb::evaluate_corpus(pairs, path(state)));
}
BENCHMARK(BM_EvaluateCorpus)->ArgsProduct({{1000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_LocateCorpus(benchmark::State& state) {
  std::vector<sb::Document> docs;
  for (const auto& item : corpus()) docs.push_back(item.doc);
  // Stand-in detector with a fixed per-span cost.
  const sb::SpanDetector detector = [](const sb::Document& doc, sb::SentenceSpan span) {
    double acc = 0.0;
    for (std::size_t s = span.begin; s < span.end; ++s) acc += static_cast<double>(doc.sentences[s].size());
    return static_cast<double>(sb::mix_seed(static_cast<std::uint64_t>(acc), span.begin) >> 11) * 0x1.0p-53;
  };
  for (auto _ : state) benchmark::DoNotOptimize(sb::locate_corpus(docs, detector, {0.3, 4}, path(state)));
}
BENCHMARK(BM_LocateCorpus)->ArgsProduct({{64}, {0, 1}})->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
