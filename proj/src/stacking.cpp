#include "stylebreach/stacking.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>

#include <spdlog/spdlog.h>

#include "stylebreach/error.hpp"
#include "stylebreach/random.hpp"

namespace stylebreach {
using nlohmann::json;

namespace {

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& X, std::span<const std::size_t> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

Labels take_rows(const Labels& y, std::span<const std::size_t> rows) {
  Labels out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out[static_cast<Eigen::Index>(i)] = y[static_cast<Eigen::Index>(rows[i])];
  return out;
}

std::vector<Document> take_docs(std::span<const Document> docs, std::span<const std::size_t> rows) {
  std::vector<Document> out;
  out.reserve(rows.size());
  for (const auto r : rows) out.push_back(docs[r]);
  return out;
}

std::uint64_t zero_level_seed(std::uint64_t seed, FeatureGroup group, std::size_t learner, bool final_fit) {
  return mix_seed(seed, (final_fit ? 2000 : 1000) + 16 * static_cast<std::uint64_t>(group) + learner);
}

json spec_to_json(const LearnerSpec& spec) {
  return {{"kind", learner_kind_name(spec.kind)}, {"hyper", spec.hyper}};
}

LearnerSpec spec_from_json(const json& j) {
  LearnerSpec spec;
  spec.kind = parse_learner_kind(j.at("kind").get<std::string>());
  spec.hyper = j.value("hyper", json::object());
  spec.validate();
  return spec;
}

json feature_config_to_json(const FeatureConfig& c) {
  return {{"segments", c.segments},
          {"window_overlap", c.window_overlap},
          {"boundary_threshold", c.boundary_threshold},
          {"boundary_mode", c.boundary_mode == BoundaryScoreMode::Position ? "position" : "count"},
          {"entity_min_length", c.entity_min_length},
          {"max_digit_run", c.limits.max_digit_run},
          {"repeat_run", c.limits.repeat_run},
          {"max_word_length", c.limits.max_word_length}};
}

FeatureConfig feature_config_from_json(const json& j) {
  FeatureConfig c;
  c.segments = j.at("segments").get<std::size_t>();
  c.window_overlap = j.at("window_overlap").get<double>();
  c.boundary_threshold = j.at("boundary_threshold").get<double>();
  const auto mode = j.at("boundary_mode").get<std::string>();
  if (mode != "position" && mode != "count") throw ParseError("unknown boundary mode '" + mode + "'");
  c.boundary_mode = mode == "position" ? BoundaryScoreMode::Position : BoundaryScoreMode::Count;
  c.entity_min_length = j.at("entity_min_length").get<std::size_t>();
  c.limits.max_digit_run = j.at("max_digit_run").get<std::size_t>();
  c.limits.repeat_run = j.at("repeat_run").get<std::size_t>();
  c.limits.max_word_length = j.at("max_word_length").get<std::size_t>();
  return c;
}

json branch_config_to_json(const GbmBranchConfig& c) {
  return {{"min_df", c.tfidf.min_df},
          {"lowercase", c.tfidf.lowercase},
          {"l2_normalize", c.tfidf.l2_normalize},
          {"sublinear_tf", c.tfidf.sublinear_tf},
          {"selection_threshold", c.selection_threshold},
          {"selection_C", c.selection_C},
          {"folds", c.folds},
          {"transductive_idf", c.transductive_idf},
          {"gbm", spec_to_json(c.gbm)}};
}

GbmBranchConfig branch_config_from_json(const json& j) {
  GbmBranchConfig c;
  c.tfidf.min_df = j.at("min_df").get<std::size_t>();
  c.tfidf.lowercase = j.at("lowercase").get<bool>();
  c.tfidf.l2_normalize = j.at("l2_normalize").get<bool>();
  c.tfidf.sublinear_tf = j.at("sublinear_tf").get<bool>();
  c.selection_threshold = j.at("selection_threshold").get<double>();
  c.selection_C = j.at("selection_C").get<double>();
  c.folds = j.at("folds").get<std::size_t>();
  c.transductive_idf = j.at("transductive_idf").get<bool>();
  c.gbm = spec_from_json(j.at("gbm"));
  return c;
}

json boundary_table_to_json(const BoundaryScoreTable& table) {
  json words = json::array();
  for (const auto& [word, e] : table.entries()) {
    words.push_back({word, e.position_score, e.occurrences, e.begin_count, e.end_count});
  }
  return {{"k", table.steepness()}, {"words", words}};
}

BoundaryScoreTable boundary_table_from_json(const json& j) {
  std::map<std::string, BoundaryScoreTable::Entry> entries;
  for (const auto& w : j.at("words")) {
    BoundaryScoreTable::Entry e;
    e.position_score = w.at(1).get<double>();
    e.occurrences = w.at(2).get<std::size_t>();
    e.begin_count = w.at(3).get<std::size_t>();
    e.end_count = w.at(4).get<std::size_t>();
    entries.emplace(w.at(0).get<std::string>(), e);
  }
  return BoundaryScoreTable::from_entries(std::move(entries), j.at("k").get<double>());
}

// Weighted probability per group for every row of `table`.
Eigen::VectorXd group_probability(const GroupStack& stack, const Eigen::MatrixXd& X) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(X.rows());
  for (std::size_t k = 0; k < stack.learners.size(); ++k) {
    p += stack.weights[k] * stack.learners[k].predict_proba(X);
  }
  return p;
}

void fill_meta_columns(Eigen::MatrixXd& M, std::size_t g, const Eigen::VectorXd& p, bool pair) {
  if (pair) {
    M.col(static_cast<Eigen::Index>(2 * g)) = Eigen::VectorXd::Ones(p.size()) - p;
    M.col(static_cast<Eigen::Index>(2 * g + 1)) = p;
  } else {
    M.col(static_cast<Eigen::Index>(g)) = p;
  }
}

}  // namespace

std::vector<double> group_weights(std::span<const double> accuracies) {
  if (accuracies.empty()) throw InvalidArgument("group_weights: no accuracies");
  double total = 0.0;
  for (const double a : accuracies) {
    if (!(a >= 0.0 && a <= 1.0)) throw InvalidArgument("group_weights: accuracy outside [0, 1]");
    total += a;
  }
  std::vector<double> w(accuracies.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = total > 0.0 ? accuracies[i] / total : 1.0 / static_cast<double>(w.size());
  }
  return w;
}

std::vector<LearnerSpec> StackingConfig::default_zero_level_specs() {
  std::vector<LearnerSpec> specs;
  for (const auto kind : kZeroLevelKinds) specs.push_back(LearnerSpec::defaults(kind));
  return specs;
}

std::size_t StackingConfig::meta_dimension() const {
  return (pair_meta_features ? 2 : 1) * groups.size() + 1;
}

json StackingConfig::to_json() const {
  json group_ids = json::array();
  for (const auto g : groups) group_ids.push_back(group_id(g));
  json zero = json::array();
  for (const auto& s : zero_level) zero.push_back(spec_to_json(s));
  return {{"groups", group_ids},
          {"features", feature_config_to_json(features)},
          {"holdout_fraction", holdout_fraction},
          {"zero_level", zero},
          {"meta", spec_to_json(meta)},
          {"branch", branch_config_to_json(branch)},
          {"pair_meta_features", pair_meta_features},
          {"fragment_augmentation", fragment_augmentation},
          {"fragments_per_document", fragments_per_document}};
}

StackingConfig StackingConfig::from_json(const json& j) {
  StackingConfig c;
  c.groups.clear();
  for (const auto& g : j.at("groups")) c.groups.push_back(parse_feature_group(g.get<std::string>()));
  c.features = feature_config_from_json(j.at("features"));
  c.holdout_fraction = j.at("holdout_fraction").get<double>();
  c.zero_level.clear();
  for (const auto& s : j.at("zero_level")) c.zero_level.push_back(spec_from_json(s));
  c.meta = spec_from_json(j.at("meta"));
  c.branch = branch_config_from_json(j.at("branch"));
  c.pair_meta_features = j.at("pair_meta_features").get<bool>();
  c.fragment_augmentation = j.at("fragment_augmentation").get<bool>();
  c.fragments_per_document = j.at("fragments_per_document").get<std::size_t>();
  return c;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_holdout_split(
    const Labels& y, double holdout_fraction, std::uint64_t seed, std::span<const std::size_t> origin) {
  const auto n = static_cast<std::size_t>(y.size());
  if (!origin.empty() && origin.size() != n) throw InvalidArgument("holdout split: origin length mismatch");
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    throw InvalidArgument("holdout split: fraction must lie in (0, 1)");
  }
  const auto origin_of = [&](std::size_t i) { return origin.empty() ? i : origin[i]; };

  // Units in first-appearance order, labeled by their first row.
  std::map<std::size_t, std::size_t> unit_index;
  std::vector<int> unit_label;
  for (std::size_t i = 0; i < n; ++i) {
    if (unit_index.emplace(origin_of(i), unit_label.size()).second) {
      unit_label.push_back(y[static_cast<Eigen::Index>(i)]);
    }
  }
  Rng rng(seed);
  std::vector<bool> held(unit_label.size(), false);
  for (const int cls : {0, 1}) {
    std::vector<std::size_t> members;
    for (std::size_t u = 0; u < unit_label.size(); ++u) {
      if (unit_label[u] == cls) members.push_back(u);
    }
    if (members.size() < 2) {
      throw InvalidArgument("holdout split: class " + std::to_string(cls) +
                            " needs at least two documents to appear in both splits");
    }
    rng.shuffle(members);
    const auto take = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(holdout_fraction * static_cast<double>(members.size()))), 1,
        members.size() - 1);
    for (std::size_t i = 0; i < take; ++i) held[members[i]] = true;
  }
  std::vector<std::size_t> train, holdout;
  for (std::size_t i = 0; i < n; ++i) {
    (held[unit_index.at(origin_of(i))] ? holdout : train).push_back(i);
  }
  for (const auto* side : {&train, &holdout}) {
    bool has[2] = {false, false};
    for (const auto r : *side) has[y[static_cast<Eigen::Index>(r)]] = true;
    if (!has[0] || !has[1]) throw InvalidArgument("holdout split: a class is missing from one side");
  }
  return {train, holdout};
}

std::vector<LabeledDocument> fragment_augmentation(std::span<const LabeledDocument> corpus,
                                                   std::size_t per_document, std::uint64_t seed,
                                                   std::vector<std::size_t>* origin) {
  std::vector<LabeledDocument> out;
  Rng rng(seed);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& item = corpus[i];
    const std::size_t n = item.doc.sentence_count();
    if (n < 4 || (item.changed && !item.has_borders)) continue;
    std::vector<SentenceSpan> spans = {{0, n / 2}, {n / 2, n}};
    for (std::size_t q = 0; q < 4; ++q) spans.push_back({q * n / 4, (q + 1) * n / 4});
    for (const auto pick : rng.sample_without_replacement(spans.size(), per_document)) {
      const SentenceSpan span = spans[pick];
      LabeledDocument fragment;
      fragment.doc = item.doc.slice(span);
      fragment.doc.id = item.doc.id + "#" + std::to_string(span.begin) + "-" + std::to_string(span.end);
      fragment.has_borders = item.has_borders;
      for (const auto b : item.borders) {
        if (b > span.begin && b < span.end) fragment.borders.push_back(b - span.begin);
      }
      fragment.changed = !fragment.borders.empty();
      out.push_back(std::move(fragment));
      if (origin) origin->push_back(i);
    }
  }
  return out;
}

BoundaryScoreTable boundary_table_from_corpus(std::span<const LabeledDocument> corpus, const Lexicon& lexicon) {
  std::vector<std::vector<std::string>> statements;
  for (const auto& item : corpus) {
    if (!item.has_borders && item.changed) continue;
    auto blocks = statements_from_borders(item.doc, item.borders, lexicon);
    std::move(blocks.begin(), blocks.end(), std::back_inserter(statements));
  }
  return BoundaryScoreTable::build(statements);
}

StackedModel train_stack(std::span<const LabeledDocument> corpus, const Lexicon& lexicon,
                         const StackingConfig& config, std::uint64_t seed, const StackHooks& hooks,
                         Execution exec, StackReport* report, std::span<const Document> idf_extra) {
  if (corpus.size() < 40) {
    throw InvalidArgument("train_stack: need at least 40 labeled documents, got " + std::to_string(corpus.size()));
  }
  std::vector<Document> docs;
  std::vector<std::size_t> origin;
  std::vector<int> labels;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    docs.push_back(corpus[i].doc);
    labels.push_back(corpus[i].changed ? 1 : 0);
    origin.push_back(i);
  }
  if (config.fragment_augmentation) {
    const auto fragments = fragment_augmentation(corpus, config.fragments_per_document, mix_seed(seed, 7), &origin);
    for (const auto& f : fragments) {
      docs.push_back(f.doc);
      labels.push_back(f.changed ? 1 : 0);
    }
    spdlog::info("fragment augmentation: {} extra training rows", fragments.size());
  }
  Labels y = Eigen::Map<const Eigen::VectorXi>(labels.data(), static_cast<Eigen::Index>(labels.size()));

  std::shared_ptr<const BoundaryScoreTable> boundary;
  if (std::find(config.groups.begin(), config.groups.end(), FeatureGroup::StatementBoundary) != config.groups.end()) {
    boundary = std::make_shared<const BoundaryScoreTable>(boundary_table_from_corpus(corpus, lexicon));
  }
  const FeatureExtractor extractor(lexicon, config.features, boundary);
  const FeatureTable table = extract_feature_table(extractor, docs, config.groups, exec);
  StackedModel model = train_stack_from_table(table, docs, y, config, seed, hooks, exec, report, origin, idf_extra);
  model.boundary_table = boundary;
  model.lexicon_fingerprint = lexicon.fingerprint();
  return model;
}

StackedModel train_stack_from_table(const FeatureTable& table, std::span<const Document> docs, const Labels& y,
                                    const StackingConfig& config, std::uint64_t seed, const StackHooks& hooks,
                                    Execution exec, StackReport* report, std::span<const std::size_t> origin,
                                    std::span<const Document> idf_extra) {
  if (config.groups.empty()) throw InvalidArgument("train_stack: no feature groups configured");
  if (config.zero_level.empty()) throw InvalidArgument("train_stack: no zero-level learners configured");
  if (static_cast<Eigen::Index>(docs.size()) != y.size()) {
    throw InvalidArgument("train_stack: documents and labels differ in length");
  }
  for (const auto g : config.groups) {
    if (table.matrix(g).rows() != y.size()) throw InvalidArgument("train_stack: feature table rows mismatch");
  }

  const auto [train, holdout] = stratified_holdout_split(y, config.holdout_fraction, mix_seed(seed, 1), origin);
  const Labels y_train = take_rows(y, train);
  const Labels y_hold = take_rows(y, holdout);

  const ZeroLevelTrainer train_zero = hooks.train_zero_level
      ? hooks.train_zero_level
      : ZeroLevelTrainer([](FeatureGroup, const LearnerSpec& spec, const Eigen::MatrixXd& X, const Labels& labels,
                            std::uint64_t s) { return train_learner(spec, X, labels, s, Execution::Serial); });

  const std::size_t G = config.groups.size();
  const std::size_t K = config.zero_level.size();
  const auto fit_all = [&](std::span<const std::size_t> rows, const Labels& labels, bool final_fit) {
    std::vector<TrainedLearner> learners(G * K);
    for_each_index(G * K, exec, [&](std::size_t t) {
      const FeatureGroup group = config.groups[t / K];
      const Eigen::MatrixXd X = take_rows(table.matrix(group), rows);
      learners[t] = train_zero(group, config.zero_level[t % K], X, labels,
                               zero_level_seed(seed, group, t % K, final_fit));
    });
    return learners;
  };

  // Zero-level learners on the training part, scored on the holdout part.
  const auto partial = fit_all(train, y_train, false);
  StackedModel model;
  model.config = config;
  model.groups.resize(G);
  std::vector<GroupReport> group_reports(G);
  Eigen::MatrixXd M(static_cast<Eigen::Index>(holdout.size()), static_cast<Eigen::Index>(config.meta_dimension()));
  for (std::size_t g = 0; g < G; ++g) {
    const Eigen::MatrixXd X_hold = take_rows(table.matrix(config.groups[g]), holdout);
    std::vector<double> acc(K);
    GroupStack stack;
    stack.group = config.groups[g];
    for (std::size_t k = 0; k < K; ++k) {
      stack.learners.push_back(partial[g * K + k]);
      acc[k] = accuracy(stack.learners[k].predict_proba(X_hold), y_hold);
    }
    stack.weights = group_weights(acc);
    const Eigen::VectorXd p = group_probability(stack, X_hold);
    fill_meta_columns(M, g, p, config.pair_meta_features);
    group_reports[g] = {stack.group, acc, stack.weights, accuracy(p, y_hold), {}};
    model.groups[g].group = stack.group;
    model.groups[g].weights = stack.weights;
  }

  const auto train_docs = take_docs(docs, train);
  const auto hold_docs = take_docs(docs, holdout);
  const GbmBranch partial_branch = GbmBranch::train(train_docs, y_train, config.branch, mix_seed(seed, 3),
                                                    hold_docs, exec);
  const Eigen::VectorXd branch_hold = partial_branch.predict(hold_docs);
  M.col(M.cols() - 1) = branch_hold;

  model.meta = train_learner(config.meta, M, y_hold, mix_seed(seed, 5), exec);

  // Refit every zero-level learner and the branch on all rows; weights stay.
  const Labels y_all = y;
  std::vector<std::size_t> all(static_cast<std::size_t>(y.size()));
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  auto final_learners = fit_all(all, y_all, true);
  for (std::size_t g = 0; g < G; ++g) {
    for (std::size_t k = 0; k < K; ++k) model.groups[g].learners.push_back(std::move(final_learners[g * K + k]));
  }
  model.branch = GbmBranch::train(docs, y_all, config.branch, mix_seed(seed, 4), idf_extra, exec);

  if (report) {
    report->train_rows = train;
    report->holdout_rows = holdout;
    report->branch_accuracy = accuracy(branch_hold, y_hold);
    report->meta_holdout_accuracy = accuracy(model.meta.predict_proba(M), y_hold);
    if (const auto* lr = dynamic_cast<const LogisticModel*>(model.meta.model.get())) {
      const std::size_t width = config.pair_meta_features ? 2 : 1;
      for (std::size_t g = 0; g < G; ++g) {
        for (std::size_t c = 0; c < width; ++c) {
          group_reports[g].meta_coefficients.push_back(lr->coef()[static_cast<Eigen::Index>(g * width + c)]);
        }
      }
      report->branch_coefficient = lr->coef()[lr->coef().size() - 1];
      report->meta_intercept = lr->intercept();
    }
    report->groups = std::move(group_reports);
  }
  return model;
}

Eigen::MatrixXd meta_features(const StackedModel& model, const FeatureTable& table,
                              const Eigen::VectorXd& branch_probabilities) {
  const Eigen::Index rows = branch_probabilities.size();
  Eigen::MatrixXd M(rows, static_cast<Eigen::Index>(model.meta_dimension()));
  for (std::size_t g = 0; g < model.groups.size(); ++g) {
    const Eigen::MatrixXd& X = table.matrix(model.groups[g].group);
    if (X.rows() != rows) throw InvalidArgument("meta_features: feature table rows mismatch");
    fill_meta_columns(M, g, group_probability(model.groups[g], X), model.config.pair_meta_features);
  }
  M.col(M.cols() - 1) = branch_probabilities;
  return M;
}

Eigen::VectorXd predict_from_table(const StackedModel& model, const FeatureTable& table,
                                   const Eigen::VectorXd& branch_probabilities) {
  return model.meta.predict_proba(meta_features(model, table, branch_probabilities));
}

ChangeDetector::ChangeDetector(std::shared_ptr<const StackedModel> model, const Lexicon& lexicon)
    : model_(std::move(model)), extractor_(lexicon, model_->config.features, model_->boundary_table) {
  if (!model_->lexicon_fingerprint.empty() && model_->lexicon_fingerprint != lexicon.fingerprint()) {
    throw ModelFormatError("model was trained with lexicon " + model_->lexicon_fingerprint +
                           ", loaded lexicon is " + lexicon.fingerprint());
  }
}

double ChangeDetector::probability(const Document& doc) const {
  return probabilities(std::span(&doc, 1), Execution::Serial)[0];
}

Eigen::VectorXd ChangeDetector::probabilities(std::span<const Document> docs, Execution exec) const {
  if (docs.empty()) return Eigen::VectorXd();
  const FeatureTable table = extract_feature_table(extractor_, docs, model_->config.groups, exec);
  return predict_from_table(*model_, table, model_->branch.predict(docs));
}

json model_to_json(const StackedModel& model) {
  json groups = json::array();
  for (const auto& g : model.groups) {
    json learners = json::array();
    for (const auto& l : g.learners) learners.push_back(learner_to_json(l));
    groups.push_back({{"group", group_id(g.group)}, {"weights", g.weights}, {"learners", learners}});
  }
  json out = {{"format", kModelFormat},
              {"version", kModelVersion},
              {"lexicon", model.lexicon_fingerprint},
              {"config", model.config.to_json()},
              {"groups", groups},
              {"branch", model.branch.to_json()},
              {"meta", learner_to_json(model.meta)}};
  out["boundary_table"] = model.boundary_table ? boundary_table_to_json(*model.boundary_table) : json(nullptr);
  return out;
}

StackedModel model_from_json(const json& j) {
  if (!j.is_object() || j.value("format", "") != kModelFormat) {
    throw ModelFormatError("not a stylebreach model container");
  }
  if (j.value("version", -1) != kModelVersion) {
    throw ModelFormatError("unsupported model version " + j.value("version", json(nullptr)).dump() +
                           " (expected " + std::to_string(kModelVersion) + ")");
  }
  try {
    StackedModel model;
    model.lexicon_fingerprint = j.at("lexicon").get<std::string>();
    model.config = StackingConfig::from_json(j.at("config"));
    for (const auto& g : j.at("groups")) {
      GroupStack stack;
      stack.group = parse_feature_group(g.at("group").get<std::string>());
      stack.weights = g.at("weights").get<std::vector<double>>();
      for (const auto& l : g.at("learners")) stack.learners.push_back(learner_from_json(l));
      if (stack.weights.size() != stack.learners.size()) throw ParseError("group weights and learners differ");
      model.groups.push_back(std::move(stack));
    }
    if (model.groups.size() != model.config.groups.size()) throw ParseError("group count differs from config");
    model.branch = GbmBranch::from_json(j.at("branch"));
    model.meta = learner_from_json(j.at("meta"));
    if (model.meta.input_dimension() != model.meta_dimension()) {
      throw ParseError("meta-learner input dimension " + std::to_string(model.meta.input_dimension()) +
                       " does not match " + std::to_string(model.meta_dimension()));
    }
    if (!j.at("boundary_table").is_null()) {
      model.boundary_table = std::make_shared<const BoundaryScoreTable>(boundary_table_from_json(j.at("boundary_table")));
    }
    return model;
  } catch (const json::exception& e) {
    throw ParseError(std::string("model container: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("model container: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const StackedModel& model) {
  const auto bytes = json::to_cbor(model_to_json(model));
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("cannot write model to " + path.string());
}

StackedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot read model " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  json j;
  try {
    j = json::from_cbor(bytes);
  } catch (const json::exception& e) {
    throw ModelFormatError(path.string() + ": not a CBOR model container (" + e.what() + ")");
  }
  return model_from_json(j);
}

}  // namespace stylebreach
