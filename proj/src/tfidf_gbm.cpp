#include "stylebreach/tfidf_gbm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "stylebreach/error.hpp"
#include "stylebreach/random.hpp"

namespace stylebreach {

std::vector<std::string> tfidf_terms(const Document& doc, bool lowercase) {
  std::vector<std::string> terms;
  for (const auto& token : doc.tokens) {
    if (!is_word_token(token.text)) continue;
    terms.push_back(lowercase && !is_special_token(token.text) ? to_lower(token.text) : token.text);
  }
  return terms;
}

TfidfVectorizer TfidfVectorizer::fit(std::span<const Document> train, std::span<const Document> extra,
                                     const TfidfConfig& config) {
  if (train.empty()) throw InvalidArgument("tfidf: empty training corpus");
  std::map<std::string, std::size_t> train_df;
  std::map<std::string, std::size_t> all_df;
  const auto count_df = [&](const Document& doc, bool is_train) {
    const auto terms = tfidf_terms(doc, config.lowercase);
    const std::set<std::string> distinct(terms.begin(), terms.end());
    for (const auto& t : distinct) {
      ++all_df[t];
      if (is_train) ++train_df[t];
    }
  };
  for (const auto& doc : train) count_df(doc, true);
  for (const auto& doc : extra) count_df(doc, false);

  const std::size_t min_df = std::max<std::size_t>(1, std::min(config.min_df, train.size()));
  TfidfVectorizer v;
  v.config_ = config;
  v.transductive_ = !extra.empty();
  for (const auto& [term, df] : train_df) {
    if (df >= min_df) v.terms_.push_back(term);
  }
  if (v.terms_.empty()) throw InvalidArgument("tfidf: empty vocabulary");
  const double n = static_cast<double>(train.size() + extra.size());
  v.idf_.resize(static_cast<Eigen::Index>(v.terms_.size()));
  for (std::size_t c = 0; c < v.terms_.size(); ++c) {
    const double df = static_cast<double>(all_df.at(v.terms_[c]));
    v.idf_[static_cast<Eigen::Index>(c)] = std::log((1.0 + n) / (1.0 + df)) + 1.0;
  }
  return v;
}

std::optional<std::size_t> TfidfVectorizer::column(std::string_view term) const {
  const auto it = std::lower_bound(terms_.begin(), terms_.end(), term);
  if (it == terms_.end() || *it != term) return std::nullopt;
  return static_cast<std::size_t>(it - terms_.begin());
}

SparseRows TfidfVectorizer::transform(std::span<const Document> docs) const {
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t r = 0; r < docs.size(); ++r) {
    const auto terms = tfidf_terms(docs[r], config_.lowercase);
    if (terms.empty()) continue;
    std::map<std::size_t, double> counts;
    for (const auto& t : terms) {
      if (const auto c = column(t)) counts[*c] += 1.0;
    }
    double norm = 0.0;
    std::vector<std::pair<std::size_t, double>> row;
    for (const auto& [c, count] : counts) {
      const double tf = config_.sublinear_tf ? (1.0 + std::log(count)) / static_cast<double>(terms.size())
                                             : count / static_cast<double>(terms.size());
      const double value = tf * idf_[static_cast<Eigen::Index>(c)];
      row.emplace_back(c, value);
      norm += value * value;
    }
    norm = std::sqrt(norm);
    for (const auto& [c, value] : row) {
      triplets.emplace_back(static_cast<int>(r), static_cast<int>(c),
                            config_.l2_normalize && norm > 0 ? value / norm : value);
    }
  }
  SparseRows X(static_cast<Eigen::Index>(docs.size()), static_cast<Eigen::Index>(terms_.size()));
  X.setFromTriplets(triplets.begin(), triplets.end());
  return X;
}

SparseRows TfidfVectorizer::transform(const Document& doc) const { return transform(std::span(&doc, 1)); }

nlohmann::json TfidfVectorizer::to_json() const {
  return {{"terms", terms_},
          {"idf", vector_to_json(idf_)},
          {"transductive", transductive_},
          {"min_df", config_.min_df},
          {"lowercase", config_.lowercase},
          {"l2_normalize", config_.l2_normalize},
          {"sublinear_tf", config_.sublinear_tf}};
}

TfidfVectorizer TfidfVectorizer::from_json(const nlohmann::json& j) {
  TfidfVectorizer v;
  v.terms_ = j.at("terms").get<std::vector<std::string>>();
  v.idf_ = vector_from_json(j.at("idf"));
  v.transductive_ = j.at("transductive").get<bool>();
  v.config_.min_df = j.at("min_df").get<std::size_t>();
  v.config_.lowercase = j.at("lowercase").get<bool>();
  v.config_.l2_normalize = j.at("l2_normalize").get<bool>();
  v.config_.sublinear_tf = j.at("sublinear_tf").get<bool>();
  if (static_cast<Eigen::Index>(v.terms_.size()) != v.idf_.size() || v.terms_.empty() ||
      !std::is_sorted(v.terms_.begin(), v.terms_.end())) {
    throw ParseError("tfidf: inconsistent vocabulary");
  }
  return v;
}

std::vector<std::size_t> select_features(const SparseRows& X, const Labels& y, double threshold, double C,
                                         std::uint64_t seed) {
  bool any = false;
  for (Eigen::Index k = 0; k < X.nonZeros() && !any; ++k) any = X.valuePtr()[k] != 0.0;
  if (!any) throw InvalidArgument("select_features: feature matrix is all zero");
  if (threshold < 0) throw InvalidArgument("select_features: threshold must be nonnegative");

  LogisticParams params;
  params.solver = LogisticSolver::Sag;
  params.C = C;
  const auto model = LogisticModel::fit_sag(X, y, params, seed);
  const Eigen::VectorXd& coef = model.coef();

  std::vector<std::size_t> selected;
  for (Eigen::Index c = 0; c < coef.size(); ++c) {
    if (std::abs(coef[c]) > threshold) selected.push_back(static_cast<std::size_t>(c));
  }
  if (!selected.empty()) return selected;

  std::vector<std::size_t> order;
  for (Eigen::Index c = 0; c < coef.size(); ++c) {
    if (coef[c] != 0.0) order.push_back(static_cast<std::size_t>(c));
  }
  if (order.empty()) throw InvalidArgument("select_features: all coefficients are zero");
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(coef[static_cast<Eigen::Index>(a)]) > std::abs(coef[static_cast<Eigen::Index>(b)]);
  });
  order.resize(std::min<std::size_t>(order.size(), 100));
  std::sort(order.begin(), order.end());
  return order;
}

Eigen::MatrixXd select_columns(const SparseRows& X, std::span<const std::size_t> columns) {
  std::vector<int> position(static_cast<std::size_t>(X.cols()), -1);
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] >= position.size()) throw InvalidArgument("select_columns: column out of range");
    position[columns[k]] = static_cast<int>(k);
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(X.rows(), static_cast<Eigen::Index>(columns.size()));
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    for (SparseRows::InnerIterator it(X, r); it; ++it) {
      const int p = position[static_cast<std::size_t>(it.col())];
      if (p >= 0) out(r, p) = it.value();
    }
  }
  return out;
}

std::vector<std::size_t> stratified_folds(const Labels& y, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw InvalidArgument("stratified_folds: need at least two folds");
  std::vector<std::size_t> fold(static_cast<std::size_t>(y.size()), 0);
  Rng rng(seed);
  std::size_t next = 0;
  for (int label : {0, 1}) {
    std::vector<std::size_t> rows;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (y[i] == label) rows.push_back(static_cast<std::size_t>(i));
    }
    rng.shuffle(rows);
    for (const auto r : rows) fold[r] = next++ % folds;
  }
  return fold;
}

std::vector<TrainedLearner> train_gbm_bagged(const Eigen::MatrixXd& X, const Labels& y, const LearnerSpec& spec,
                                             std::uint64_t seed, std::size_t folds, Execution exec) {
  if (X.rows() < 10) throw InvalidArgument("train_gbm_bagged: need at least 10 rows");
  check_training_data(X, y);
  const auto assignment = stratified_folds(y, folds, seed);
  std::vector<TrainedLearner> models(folds);
  for_each_index(folds, exec, [&](std::size_t k) {
    std::vector<Eigen::Index> rows;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      if (assignment[i] != k) rows.push_back(static_cast<Eigen::Index>(i));
    }
    Eigen::MatrixXd Xk(static_cast<Eigen::Index>(rows.size()), X.cols());
    Labels yk(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      Xk.row(static_cast<Eigen::Index>(r)) = X.row(rows[r]);
      yk[static_cast<Eigen::Index>(r)] = y[rows[r]];
    }
    models[k] = train_learner(spec, Xk, yk, mix_seed(seed, k), Execution::Serial);
  });
  return models;
}

Eigen::VectorXd bagged_probability(std::span<const TrainedLearner> members, const Eigen::MatrixXd& X) {
  if (members.empty()) throw InvalidArgument("bagged_probability: no members");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(X.rows());
  for (const auto& m : members) sum += m.predict_proba(X);
  return sum / static_cast<double>(members.size());
}

GbmBranch GbmBranch::train(std::span<const Document> docs, const Labels& y, const GbmBranchConfig& config,
                           std::uint64_t seed, std::span<const Document> idf_extra, Execution exec) {
  if (static_cast<Eigen::Index>(docs.size()) != y.size()) {
    throw InvalidArgument("gbm branch: documents and labels differ in length");
  }
  GbmBranch branch;
  branch.vectorizer_ = TfidfVectorizer::fit(docs, config.transductive_idf ? idf_extra : std::span<const Document>{},
                                            config.tfidf);
  const SparseRows X = branch.vectorizer_.transform(docs);
  branch.selected_ = select_features(X, y, config.selection_threshold, config.selection_C, mix_seed(seed, 100));
  branch.models_ =
      train_gbm_bagged(select_columns(X, branch.selected_), y, config.gbm, mix_seed(seed, 101), config.folds, exec);
  return branch;
}

Eigen::VectorXd GbmBranch::predict(std::span<const Document> docs) const {
  return bagged_probability(models_, select_columns(vectorizer_.transform(docs), selected_));
}

double GbmBranch::predict(const Document& doc) const { return predict(std::span(&doc, 1))[0]; }

nlohmann::json GbmBranch::to_json() const {
  nlohmann::json models = nlohmann::json::array();
  for (const auto& m : models_) models.push_back(learner_to_json(m));
  return {{"vectorizer", vectorizer_.to_json()}, {"selected", selected_}, {"models", models}};
}

GbmBranch GbmBranch::from_json(const nlohmann::json& j) {
  GbmBranch b;
  b.vectorizer_ = TfidfVectorizer::from_json(j.at("vectorizer"));
  b.selected_ = j.at("selected").get<std::vector<std::size_t>>();
  for (const auto& m : j.at("models")) b.models_.push_back(learner_from_json(m));
  if (b.selected_.empty() || b.models_.empty()) throw ParseError("gbm branch: empty selection or ensemble");
  for (const auto c : b.selected_) {
    if (c >= b.vectorizer_.size()) throw ParseError("gbm branch: selected column out of range");
  }
  return b;
}

}  // namespace stylebreach
