// Acceptance gates: one PASS / FAIL / SKIP line per criterion.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>

#include <spdlog/spdlog.h>

#include "cli.hpp"
#include "naive_windows.hpp"
#include "stylebreach/breach_locator.hpp"
#include "stylebreach/features.hpp"
#include "stylebreach/learners.hpp"
#include "stylebreach/learners/gbm.hpp"
#include "stylebreach/learners/mlp.hpp"
#include "stylebreach/random.hpp"
#include "stylebreach/seg_metrics.hpp"
#include "stylebreach/stacking.hpp"

namespace sb = stylebreach;
namespace fs = std::filesystem;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
  Verdict verdict = Verdict::Fail;
  std::string detail;
};

Outcome pass(std::string detail) { return {Verdict::Pass, std::move(detail)}; }
Outcome fail(std::string detail) { return {Verdict::Fail, std::move(detail)}; }
Outcome skip(std::string detail) { return {Verdict::Skip, std::move(detail)}; }
Outcome verdict(bool ok, std::string detail) { return ok ? pass(std::move(detail)) : fail(std::move(detail)); }

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

const sb::Lexicon& lexicon() { return sb::Lexicon::bundled(); }

const sb::AuthorVocabulary& vocabulary() {
  static const auto v = sb::AuthorVocabulary::from_lexicon(lexicon());
  return v;
}

sb::Labels labels_of(std::span<const sb::LabeledDocument> corpus) {
  sb::Labels y(static_cast<Eigen::Index>(corpus.size()));
  for (std::size_t i = 0; i < corpus.size(); ++i) y[static_cast<Eigen::Index>(i)] = corpus[i].changed ? 1 : 0;
  return y;
}

std::vector<sb::Document> docs_of(std::span<const sb::LabeledDocument> corpus) {
  std::vector<sb::Document> docs;
  for (const auto& item : corpus) docs.push_back(item.doc);
  return docs;
}

// ---------------------------------------------------------------------------

sb::Segmentation random_segmentation(std::mt19937_64& rng, std::size_t n) {
  sb::Segmentation s{n, {}};
  std::bernoulli_distribution coin(std::uniform_real_distribution<double>(0.0, 0.5)(rng));
  for (std::size_t b = 1; b < n; ++b) {
    if (coin(rng)) s.boundaries.push_back(b);
  }
  return s;
}

Outcome metric_oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1);
  std::size_t checked = 0, mismatches = 0;
  while (checked < 500) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 30)(rng);
    const auto ref = random_segmentation(rng, n);
    const auto hyp = random_segmentation(rng, n);
    const auto k = static_cast<long>(sb::default_window_size(ref));
    if (k >= static_cast<long>(n)) continue;
    ++checked;
    const auto fast = sb::win_pr(ref, hyp);
    const auto slow = naive::win_pr(ref, hyp, k);
    const bool same = sb::window_diff(ref, hyp) == naive::window_diff(ref, hyp, k) &&
                      fast.precision == slow.precision && fast.recall == slow.recall && fast.f == slow.f;
    mismatches += !same;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return verdict(mismatches == 0 && seconds < 10.0,
                 fmt("%zu instances, %zu mismatches, %.3f s", checked, mismatches, seconds));
}

Outcome window_diff_derived_case() {
  const sb::Segmentation ref{10, {5}};
  const sb::Segmentation hyp{10, {}};
  const std::size_t k = sb::default_window_size(ref);
  const double wd = sb::window_diff(ref, hyp);
  return verdict(k == 2 && wd == 0.25, fmt("k=%zu windowDiff=%.17g", k, wd));
}

Outcome half_sigmoid_closed_form() {
  sb::Rng rng(3);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double k = rng.uniform(0.01, 1000.0);
    const double x = rng.uniform01();
    worst = std::max(worst, std::abs(sb::half_sigmoid_score(x, k) - (k * x) / ((1 + k) - x)));
  }
  bool endpoints = true;
  for (const double k : {0.01, 1.0, 7.5, 100.0, 1000.0}) {
    endpoints = endpoints && sb::half_sigmoid_score(0.0, k) == 0.0 && sb::half_sigmoid_score(1.0, k) == 1.0;
  }
  return verdict(worst <= 1e-12 && endpoints,
                 fmt("max |error| %.3g over 100 pairs, endpoints %s", worst, endpoints ? "exact" : "wrong"));
}

Outcome word_frequency_class() {
  sb::Lexicon lex = lexicon();
  const double top = lex.max_frequency();
  for (int c = 1; c <= 10; ++c) lex.frequency["zzclass" + std::to_string(c)] = top / std::ldexp(1.0, c);
  lex.finalize();
  const auto the = sb::word_frequency_class("the", lex);
  bool ok = the && *the == 0.0;
  std::string wrong;
  for (int c = 1; c <= 10; ++c) {
    const auto got = sb::word_frequency_class("zzclass" + std::to_string(c), lex);
    if (!got || *got != c) {
      ok = false;
      wrong += " c=" + std::to_string(c);
    }
  }
  return verdict(ok, ok ? "class(the)=0, classes 1..10 exact" : "mismatch at" + wrong);
}

Outcome perceptron_gradient_check() {
  sb::Rng data_rng(5);
  Eigen::MatrixXd X(10, 8);
  Eigen::VectorXd y(10);
  for (Eigen::Index i = 0; i < 10; ++i) {
    for (Eigen::Index c = 0; c < X.cols(); ++c) X(i, c) = data_rng.normal();
    y[i] = static_cast<double>(i % 2);
  }
  double worst = 0.0;
  for (std::uint64_t init = 0; init < 20; ++init) {
    sb::Rng rng(500 + init);
    sb::MlpNetwork net = sb::MlpNetwork::initialize(X.cols(), 100, rng);
    Eigen::VectorXd analytic;
    sb::mlp_loss_and_gradient(net, X, y, 1e-4, &analytic);
    const Eigen::VectorXd theta = net.flatten();
    const Eigen::MatrixXd Z1 = (X * net.W1).rowwise() + net.b1.transpose();
    const double h = std::min(1e-6, 0.1 * Z1.cwiseAbs().minCoeff() / (1.0 + X.cwiseAbs().maxCoeff()));
    Eigen::VectorXd numeric(theta.size());
    for (Eigen::Index k = 0; k < theta.size(); ++k) {
      Eigen::VectorXd plus = theta, minus = theta;
      plus[k] += h;
      minus[k] -= h;
      sb::MlpNetwork a = net, b = net;
      a.assign(plus);
      b.assign(minus);
      numeric[k] = (sb::mlp_loss_and_gradient(a, X, y, 1e-4, nullptr) -
                    sb::mlp_loss_and_gradient(b, X, y, 1e-4, nullptr)) / (2 * h);
    }
    worst = std::max(worst, (analytic - numeric).norm() / (analytic.norm() + numeric.norm()));
  }
  return verdict(worst < 1e-4, fmt("worst relative error %.3g over 20 initializations", worst));
}

Outcome learner_sanity() {
  sb::Rng rng(6);
  Eigen::MatrixXd X(40, 5);
  sb::Labels y(40);
  for (Eigen::Index i = 0; i < 40; ++i) {
    y[i] = i % 2;
    X(i, 0) = y[i] == 1 ? rng.uniform(1.0, 3.0) : rng.uniform(-3.0, -1.0);
    for (Eigen::Index c = 1; c < 5; ++c) X(i, c) = rng.normal();
  }
  std::string detail;
  bool ok = true;
  for (const auto kind : sb::kAllLearnerKinds) {
    const double acc = sb::accuracy(sb::train_learner(sb::LearnerSpec::defaults(kind), X, y, 1), X, y);
    ok = ok && acc == 1.0;
    detail += fmt("%s=%.3f ", std::string(sb::learner_kind_name(kind)).c_str(), acc);
  }
  sb::Labels skewed = y;
  for (Eigen::Index i = 0; i < 10; ++i) skewed[2 * i] = 1;  // 30 of 40 positive
  sb::GbmParams params;
  params.learning_rate = 0.0;
  const Eigen::VectorXd p = sb::GbmModel::fit(X, skewed, params, 1).predict_proba(X);
  const double prior = skewed.cast<double>().mean();
  const bool prior_exact = (p.array() == prior).all();
  ok = ok && prior_exact;
  detail += prior_exact ? "gbm(lr=0)=prior exactly" : "gbm(lr=0) differs from prior";
  return verdict(ok, detail);
}

// Reads the document index stored in column 0 and returns its true label.
class OracleModel final : public sb::ProbabilisticModel {
 public:
  explicit OracleModel(std::vector<int> labels) : labels_(std::move(labels)) {}
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& X) const override {
    Eigen::VectorXd p(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) p[i] = labels_.at(static_cast<std::size_t>(X(i, 0)));
    return p;
  }
  std::size_t input_dimension() const override { return 1; }
  nlohmann::json to_json() const override { return nullptr; }

 private:
  std::vector<int> labels_;
};

sb::FeatureTable index_table(std::span<const sb::FeatureGroup> groups, std::size_t first, std::size_t count) {
  sb::FeatureTable table;
  for (const auto g : groups) {
    table.groups.push_back(g);
    Eigen::MatrixXd X(static_cast<Eigen::Index>(count), 1);
    for (std::size_t i = 0; i < count; ++i) X(static_cast<Eigen::Index>(i), 0) = static_cast<double>(first + i);
    table.matrices.push_back(X);
  }
  return table;
}

Outcome stacking_plumbing() {
  sb::SyntheticCorpusOptions options;
  options.documents = 100;
  options.authors = 10;
  options.source_sentences = 120;
  const auto corpus = sb::synthesize_corpus(options, vocabulary(), 7);
  const auto docs = docs_of(corpus);
  const sb::Labels y = labels_of(corpus);
  std::vector<int> labels(y.data(), y.data() + y.size());
  const sb::StackHooks hooks{[labels](sb::FeatureGroup, const sb::LearnerSpec& spec, const Eigen::MatrixXd&,
                                      const sb::Labels&, std::uint64_t) {
    sb::TrainedLearner l;
    l.spec = spec;
    l.model = std::make_shared<OracleModel>(labels);
    return l;
  }};
  const sb::StackingConfig config;
  const auto model = sb::train_stack_from_table(index_table(config.groups, 0, 75), std::span(docs).first(75),
                                                y.head(75), config, 7, hooks);
  const auto test_docs = std::span<const sb::Document>(docs).subspan(75);
  const Eigen::VectorXd p = sb::predict_from_table(model, index_table(config.groups, 75, 25), model.branch.predict(test_docs));
  const double acc = sb::accuracy(p, y.tail(25));
  const std::size_t dim = model.meta.input_dimension();
  const bool ok = acc == 1.0 && dim == config.groups.size() + 1 && model.meta_dimension() == dim;
  return verdict(ok, fmt("held-out accuracy %.3f, meta dimension %zu (groups %zu + 1)", acc, dim, config.groups.size()));
}

struct ChangeSetup {
  std::vector<sb::LabeledDocument> corpus;
  std::shared_ptr<const sb::StackedModel> model;
  std::unique_ptr<sb::ChangeDetector> detector;
};

std::vector<sb::LabeledDocument> change_corpus() {
  sb::SyntheticCorpusOptions options;
  options.documents = 200;
  options.changed_fraction = 0.5;
  options.min_segment_sentences = 10;
  options.max_segment_sentences = 25;
  options.authors = 20;
  options.source_sentences = 200;
  return sb::synthesize_corpus(options, vocabulary(), 1);
}

ChangeSetup make_setup(std::size_t train_documents) {
  ChangeSetup s;
  s.corpus = change_corpus();
  s.model = std::make_shared<const sb::StackedModel>(
      sb::train_stack(std::span(s.corpus).first(train_documents), lexicon(), {}, 1));
  s.detector = std::make_unique<sb::ChangeDetector>(s.model, lexicon());
  return s;
}

// Labels are placed at random, so the first 150 are a random 75%.
ChangeSetup& held_out_setup() {
  static ChangeSetup setup = make_setup(150);
  return setup;
}

// The locator's detector sees the whole change corpus; the breach corpora
// below are drawn from different synthetic authors.
ChangeSetup& full_setup() {
  static ChangeSetup setup = make_setup(200);
  return setup;
}

Outcome synthetic_change_detection() {
  const auto start = std::chrono::steady_clock::now();
  auto& s = held_out_setup();
  const auto test = std::span(s.corpus).subspan(150);
  const Eigen::VectorXd p = s.detector->probabilities(docs_of(test));
  const double acc = sb::accuracy(p, labels_of(test));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::size_t changed = 0;
  for (const auto& item : s.corpus) changed += item.changed;
  return verdict(acc >= 0.75 && seconds < 600,
                 fmt("test accuracy %.3f on 50 docs (train 150; %zu/200 two-author), %.1f s", acc, changed, seconds));
}

std::vector<sb::LabeledDocument> breach_corpus(std::uint64_t seed) {
  sb::SyntheticCorpusOptions options;
  options.documents = 50;
  options.changed_fraction = 1.0;
  options.min_changes = 1;
  options.max_changes = 3;
  options.min_segment_sentences = 25;
  options.max_segment_sentences = 40;
  options.source_sentences = 200;
  return sb::synthesize_corpus(options, vocabulary(), seed);
}

Outcome breach_localization() {
  auto& s = full_setup();
  const auto detector = sb::span_detector(*s.detector);
  double model = 0.0, rnd = 0.0, eq = 0.0, empty = 0.0, borders = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto corpus = breach_corpus(100 + seed);
    std::vector<sb::EvalPair> m, r, e, z;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto& item = corpus[i];
      const std::size_t n = item.doc.sentences.size();
      const sb::Segmentation ref{n, item.borders};
      const auto found = sb::locate_breaches(item.doc, detector, {});
      borders += static_cast<double>(found.borders.size());
      m.push_back({item.doc.id, ref, {n, found.borders}});
      r.push_back({item.doc.id, ref, sb::baseline_rnd(n, sb::mix_seed(sb::mix_seed(seed, 1), i))});
      e.push_back({item.doc.id, ref, sb::baseline_eq(n, sb::mix_seed(sb::mix_seed(seed, 2), i))});
      z.push_back({item.doc.id, ref, {n, {}}});
    }
    model += sb::evaluate_corpus(m).window_diff / 5;
    rnd += sb::evaluate_corpus(r).window_diff / 5;
    eq += sb::evaluate_corpus(e).window_diff / 5;
    empty += sb::evaluate_corpus(z).window_diff / 5;
  }
  return verdict(model < rnd && model < eq,
                 fmt("windowDiff model %.4f, BASELINE-rnd %.4f, BASELINE-eq %.4f (no borders: %.4f; %.2f borders/doc)",
                     model, rnd, eq, empty, borders / 250));
}

Outcome threshold_monotonicity() {
  auto& s = full_setup();
  const auto detector = sb::span_detector(*s.detector);
  const auto corpus = breach_corpus(101);
  std::size_t violations = 0;
  std::vector<std::size_t> totals(4, 0);
  const double thresholds[] = {0.5, 0.6, 0.75, 0.9};
  for (const auto& item : corpus) {
    std::size_t previous = SIZE_MAX;
    for (std::size_t t = 0; t < 4; ++t) {
      const std::size_t count = sb::locate_breaches(item.doc, detector, {thresholds[t], 20}).borders.size();
      totals[t] += count;
      violations += count > previous;
      previous = count;
    }
  }
  return verdict(violations == 0, fmt("%zu docs, %zu violations, borders at 0.5/0.6/0.75/0.9: %zu/%zu/%zu/%zu",
                                      corpus.size(), violations, totals[0], totals[1], totals[2], totals[3]));
}

std::optional<fs::path> env_dir(const char* name) {
  const char* value = std::getenv(name);
  if (value == nullptr || *value == '\0') return std::nullopt;
  return fs::path(value);
}

Outcome pan_datasets() {
  const auto pan18 = env_dir("STYLEBREACH_PAN2018_DIR");
  const auto pan17 = env_dir("STYLEBREACH_PAN2017_DIR");
  if (!pan18 && !pan17) return skip("set STYLEBREACH_PAN2018_DIR and/or STYLEBREACH_PAN2017_DIR to run");
  bool ok = true;
  std::string detail;
  if (pan18) {
    const auto train = sb::load_change_corpus(*pan18 / "training");
    const auto validation = sb::load_change_corpus(*pan18 / "validation");
    const auto model = std::make_shared<const sb::StackedModel>(sb::train_stack(train, lexicon(), {}, 1));
    const sb::ChangeDetector detector(model, lexicon());
    const double acc = sb::accuracy(detector.probabilities(docs_of(validation)), labels_of(validation));
    ok = ok && acc >= 0.80;
    detail += fmt("change validation accuracy %.3f (>= 0.80); ", acc);
  }
  if (pan17) {
    const auto corpus = sb::load_breach_corpus(*pan17);
    double wd = 0.0;
    for (std::size_t fold = 0; fold < 5; ++fold) {
      std::vector<sb::LabeledDocument> train, test;
      for (std::size_t i = 0; i < corpus.size(); ++i) (i % 5 == fold ? test : train).push_back(corpus[i]);
      const auto model = std::make_shared<const sb::StackedModel>(sb::train_stack(train, lexicon(), {}, 1 + fold));
      const sb::ChangeDetector detector(model, lexicon());
      std::vector<sb::EvalPair> pairs;
      for (const auto& item : test) {
        const std::size_t n = item.doc.sentences.size();
        if (n < 2) continue;
        pairs.push_back({item.doc.id, {n, item.borders},
                         {n, sb::locate_breaches(item.doc, sb::span_detector(detector), {}).borders}});
      }
      wd += sb::evaluate_corpus(pairs).window_diff / 5;
    }
    ok = ok && wd <= 0.62;
    detail += fmt("breach 5-fold windowDiff %.4f (<= 0.62)", wd);
  }
  return verdict(ok, detail);
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "stylebreach");
  return sb::cli::run(args);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome pipeline_determinism() {
  const fs::path root = fs::temp_directory_path() / "stylebreach_acceptance_determinism";
  fs::remove_all(root);
  const auto quiet = [](std::vector<std::string> args) {
    std::fflush(stdout);
    std::ostringstream sink;
    auto* old = std::cout.rdbuf(sink.rdbuf());
    const int status = run_cli(std::move(args));
    std::cout.rdbuf(old);
    return status;
  };
  const std::string train = (root / "train").string(), input = (root / "input").string();
  if (quiet({"-q", "synthesize", "--out", train, "--documents", "60", "--seed", "12"}) != 0 ||
      quiet({"-q", "synthesize", "--out", input, "--documents", "10", "--changed-fraction", "0.8", "--max-changes", "3",
             "--min-segment", "25", "--max-segment", "40", "--seed", "13"}) != 0) {
    return fail("synthesize failed");
  }
  for (const std::string run : {"a", "b"}) {
    const std::string model = (root / ("model-" + run + ".bin")).string();
    if (quiet({"-q", "train", "--corpus", train, "--out", model, "--seed", "7"}) != 0 ||
        quiet({"-q", "locate", "--model", model, "--input", input, "--out", (root / ("borders-" + run)).string(),
               "--threshold", "0.5"}) != 0) {
      return fail("train/locate failed in run " + run);
    }
  }
  std::size_t files = 0, differing = 0, borders = 0;
  for (const auto& entry : fs::directory_iterator(root / "borders-a")) {
    ++files;
    const std::string a = slurp(entry.path());
    differing += a != slurp(root / "borders-b" / entry.path().filename());
    borders += nlohmann::json::parse(a)["borders"].size();
  }
  const bool models_equal = slurp(root / "model-a.bin") == slurp(root / "model-b.bin");
  fs::remove_all(root);
  return verdict(files == 10 && differing == 0 && models_equal,
                 fmt("%zu border files (%zu borders), %zu differ; models %s", files, borders, differing,
                     models_equal ? "identical" : "differ"));
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"metric oracle equivalence", metric_oracle_equivalence},
      {"WindowDiff derived case", window_diff_derived_case},
      {"half-sigmoid closed form", half_sigmoid_closed_form},
      {"word frequency class", word_frequency_class},
      {"perceptron gradient check", perceptron_gradient_check},
      {"learner sanity", learner_sanity},
      {"stacking plumbing", stacking_plumbing},
      {"synthetic change detection", synthetic_change_detection},
      {"breach localization vs baselines", breach_localization},
      {"threshold monotonicity", threshold_monotonicity},
      {"PAN datasets", pan_datasets},
      {"train+locate determinism", pipeline_determinism},
  };
  spdlog::set_level(spdlog::level::err);
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = fail(std::string("exception: ") + e.what());
    }
    const char* tag = outcome.verdict == Verdict::Pass ? "PASS" : outcome.verdict == Verdict::Skip ? "SKIP" : "FAIL";
    failures += outcome.verdict == Verdict::Fail;
    std::printf("[%s] %2d %s: %s\n", tag, index, name, outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
