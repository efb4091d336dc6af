#pragma once

// Two-level ensemble: per feature group, four zero-level learners whose
// probabilities are mixed by holdout accuracy; the mixed probabilities and
// the TF-IDF/GBM branch probability feed a logistic-regression meta-learner.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "stylebreach/corpus_io.hpp"
#include "stylebreach/features.hpp"
#include "stylebreach/learners.hpp"
#include "stylebreach/tfidf_gbm.hpp"

namespace stylebreach {

/// weight_i = accuracy_i / sum; uniform when every accuracy is zero.
std::vector<double> group_weights(std::span<const double> accuracies);

struct StackingConfig {
  std::vector<FeatureGroup> groups = default_stack_groups();
  FeatureConfig features;
  double holdout_fraction = 0.25;
  std::vector<LearnerSpec> zero_level = default_zero_level_specs();
  LearnerSpec meta = LearnerSpec::defaults(LearnerKind::LogisticRegression);
  GbmBranchConfig branch;
  bool pair_meta_features = false;  // [1 - p, p] per group instead of p
  bool fragment_augmentation = false;
  std::size_t fragments_per_document = 2;

  static std::vector<LearnerSpec> default_zero_level_specs();
  std::size_t meta_dimension() const;
  nlohmann::json to_json() const;
  static StackingConfig from_json(const nlohmann::json& j);
};

struct GroupStack {
  FeatureGroup group = FeatureGroup::Tautology;
  std::vector<TrainedLearner> learners;  // aligned with StackingConfig::zero_level
  std::vector<double> weights;
};

struct StackedModel {
  StackingConfig config;
  std::vector<GroupStack> groups;
  GbmBranch branch;
  TrainedLearner meta;
  std::shared_ptr<const BoundaryScoreTable> boundary_table;
  std::string lexicon_fingerprint;

  std::size_t meta_dimension() const { return config.meta_dimension(); }
};

struct GroupReport {
  FeatureGroup group = FeatureGroup::Tautology;
  std::vector<double> accuracies;  // holdout accuracy per zero-level learner
  std::vector<double> weights;
  double standalone_accuracy = 0.0;  // weighted probability thresholded at 0.5
  std::vector<double> meta_coefficients;
};

struct StackReport {
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> holdout_rows;
  std::vector<GroupReport> groups;
  double branch_accuracy = 0.0;
  double branch_coefficient = 0.0;
  double meta_intercept = 0.0;
  double meta_holdout_accuracy = 0.0;
};

/// Replaces train_learner for zero-level learners, e.g. with an oracle.
using ZeroLevelTrainer = std::function<TrainedLearner(FeatureGroup, const LearnerSpec&, const Eigen::MatrixXd&,
                                                      const Labels&, std::uint64_t seed)>;

struct StackHooks {
  ZeroLevelTrainer train_zero_level;
};

/// Stratified split of rows into (train, holdout). Rows sharing an origin id
/// stay on one side. Throws InvalidArgument when a class would be missing
/// from either side.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_holdout_split(
    const Labels& y, double holdout_fraction, std::uint64_t seed, std::span<const std::size_t> origin = {});

/// Sentence-range fragments (halves and quarters) of documents, labeled
/// changed when a known border falls strictly inside. Documents labeled
/// changed without borders contribute nothing. `origin` receives the index
/// of the source document of each fragment.
std::vector<LabeledDocument> fragment_augmentation(std::span<const LabeledDocument> corpus,
                                                   std::size_t per_document, std::uint64_t seed,
                                                   std::vector<std::size_t>* origin = nullptr);

/// Boundary-word table from documents with known borders and unchanged ones.
BoundaryScoreTable boundary_table_from_corpus(std::span<const LabeledDocument> corpus, const Lexicon& lexicon);

/// Needs at least 40 documents (before augmentation) with both labels.
/// `idf_extra` joins the idf statistics of the final branch when the
/// branch is configured transductive.
StackedModel train_stack(std::span<const LabeledDocument> corpus, const Lexicon& lexicon,
                         const StackingConfig& config, std::uint64_t seed, const StackHooks& hooks = {},
                         Execution exec = Execution::Parallel, StackReport* report = nullptr,
                         std::span<const Document> idf_extra = {});

/// Training on precomputed group matrices. `origin` (optional) ties rows of
/// the same source document together in the holdout split.
StackedModel train_stack_from_table(const FeatureTable& table, std::span<const Document> docs, const Labels& y,
                                    const StackingConfig& config, std::uint64_t seed,
                                    const StackHooks& hooks = {}, Execution exec = Execution::Parallel,
                                    StackReport* report = nullptr, std::span<const std::size_t> origin = {},
                                    std::span<const Document> idf_extra = {});

/// Rows of meta-features: per configured group the weighted probability
/// (or its pair), then the branch probability.
Eigen::MatrixXd meta_features(const StackedModel& model, const FeatureTable& table,
                              const Eigen::VectorXd& branch_probabilities);
Eigen::VectorXd predict_from_table(const StackedModel& model, const FeatureTable& table,
                                   const Eigen::VectorXd& branch_probabilities);

/// A trained model bound to the feature extractor it was trained with.
class ChangeDetector {
 public:
  /// Throws ModelFormatError when the lexicon differs from the training one.
  ChangeDetector(std::shared_ptr<const StackedModel> model, const Lexicon& lexicon);

  /// Probability of a style change; throws InvalidArgument on an empty document.
  double probability(const Document& doc) const;
  Eigen::VectorXd probabilities(std::span<const Document> docs, Execution exec = Execution::Parallel) const;

  const StackedModel& model() const { return *model_; }
  const FeatureExtractor& extractor() const { return extractor_; }

 private:
  std::shared_ptr<const StackedModel> model_;
  FeatureExtractor extractor_;
};

inline constexpr const char* kModelFormat = "stylebreach-model";
inline constexpr int kModelVersion = 1;

nlohmann::json model_to_json(const StackedModel& model);
StackedModel model_from_json(const nlohmann::json& j);

/// CBOR-encoded container. load_model throws ModelFormatError on a wrong
/// format tag or version and LoadError when the file cannot be read.
void save_model(const std::filesystem::path& path, const StackedModel& model);
StackedModel load_model(const std::filesystem::path& path);

}  // namespace stylebreach
