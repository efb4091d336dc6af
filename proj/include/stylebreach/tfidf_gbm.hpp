#pragma once

// TF-IDF representation with coefficient-threshold feature selection,
// feeding five bagged gradient-boosted models.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stylebreach/document.hpp"
#include "stylebreach/learners.hpp"

namespace stylebreach {

struct TfidfConfig {
  std::size_t min_df = 2;  // capped at the number of training documents
  bool lowercase = true;
  bool l2_normalize = true;
  bool sublinear_tf = false;  // 1 + ln(count) in place of the raw count
};

/// Word tokens of a document as TF-IDF terms (special tokens kept as is).
std::vector<std::string> tfidf_terms(const Document& doc, bool lowercase = true);

class TfidfVectorizer {
 public:
  /// Vocabulary from `train` only; document frequencies and N over
  /// train and `extra`. Throws InvalidArgument on an empty corpus or vocabulary.
  static TfidfVectorizer fit(std::span<const Document> train, std::span<const Document> extra = {},
                             const TfidfConfig& config = {});

  /// tf = count / token count, times idf, then optionally L2-normalized.
  SparseRows transform(std::span<const Document> docs) const;
  SparseRows transform(const Document& doc) const;

  const std::vector<std::string>& terms() const { return terms_; }  // sorted; position = column
  const Eigen::VectorXd& idf() const { return idf_; }
  std::size_t size() const { return terms_.size(); }
  std::optional<std::size_t> column(std::string_view term) const;
  bool transductive() const { return transductive_; }
  const TfidfConfig& config() const { return config_; }

  nlohmann::json to_json() const;
  static TfidfVectorizer from_json(const nlohmann::json& j);

 private:
  std::vector<std::string> terms_;
  Eigen::VectorXd idf_;
  bool transductive_ = false;
  TfidfConfig config_;
};

/// Columns whose absolute SAG logistic-regression coefficient exceeds
/// `threshold`; when none do, the (up to) 100 largest nonzero ones.
/// Returned indices are sorted. Throws InvalidArgument on all-zero X.
std::vector<std::size_t> select_features(const SparseRows& X, const Labels& y, double threshold = 0.1,
                                         double C = 2.0, std::uint64_t seed = 0);

Eigen::MatrixXd select_columns(const SparseRows& X, std::span<const std::size_t> columns);

/// Stratified fold index per row, dealt round-robin after a seeded shuffle
/// within each class.
std::vector<std::size_t> stratified_folds(const Labels& y, std::size_t folds, std::uint64_t seed);

/// One model per fold, each fit on the other folds. Throws InvalidArgument
/// with fewer than 10 rows.
std::vector<TrainedLearner> train_gbm_bagged(const Eigen::MatrixXd& X, const Labels& y, const LearnerSpec& spec,
                                             std::uint64_t seed, std::size_t folds = 5,
                                             Execution exec = Execution::Parallel);

/// Arithmetic mean of the members' probabilities, accumulated in member order.
Eigen::VectorXd bagged_probability(std::span<const TrainedLearner> members, const Eigen::MatrixXd& X);

struct GbmBranchConfig {
  TfidfConfig tfidf;
  double selection_threshold = 0.1;
  double selection_C = 2.0;
  std::size_t folds = 5;
  bool transductive_idf = false;
  LearnerSpec gbm = LearnerSpec::defaults(LearnerKind::GradientBoostedTrees);
};

class GbmBranch {
 public:
  /// `idf_extra` contributes to idf only, and only when transductive_idf is set.
  static GbmBranch train(std::span<const Document> docs, const Labels& y, const GbmBranchConfig& config,
                         std::uint64_t seed, std::span<const Document> idf_extra = {},
                         Execution exec = Execution::Parallel);

  double predict(const Document& doc) const;
  Eigen::VectorXd predict(std::span<const Document> docs) const;

  const TfidfVectorizer& vectorizer() const { return vectorizer_; }
  const std::vector<std::size_t>& selected() const { return selected_; }
  const std::vector<TrainedLearner>& models() const { return models_; }

  nlohmann::json to_json() const;
  static GbmBranch from_json(const nlohmann::json& j);

 private:
  TfidfVectorizer vectorizer_;
  std::vector<std::size_t> selected_;
  std::vector<TrainedLearner> models_;
};

}  // namespace stylebreach
