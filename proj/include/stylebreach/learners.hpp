#pragma once

// Uniform probabilistic-classifier interface over the native learners.

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "stylebreach/learners/gbm.hpp"
#include "stylebreach/learners/logistic.hpp"
#include "stylebreach/learners/mlp.hpp"
#include "stylebreach/learners/model.hpp"
#include "stylebreach/learners/svm.hpp"
#include "stylebreach/learners/tree.hpp"
#include "stylebreach/parallel.hpp"

namespace stylebreach {

enum class LearnerKind {
  KernelMarginClassifier,
  RandomForest,
  AdaBoostTrees,
  MultiLayerPerceptron,
  GradientBoostedTrees,
  LogisticRegression,
};

inline constexpr std::array<LearnerKind, 6> kAllLearnerKinds = {
    LearnerKind::KernelMarginClassifier, LearnerKind::RandomForest,         LearnerKind::AdaBoostTrees,
    LearnerKind::MultiLayerPerceptron,   LearnerKind::GradientBoostedTrees, LearnerKind::LogisticRegression};

/// The four zero-level kinds trained per feature group.
inline constexpr std::array<LearnerKind, 4> kZeroLevelKinds = {
    LearnerKind::KernelMarginClassifier, LearnerKind::RandomForest, LearnerKind::AdaBoostTrees,
    LearnerKind::MultiLayerPerceptron};

/// "svm", "random_forest", "adaboost", "mlp", "gbm", "logistic_regression".
std::string_view learner_kind_name(LearnerKind kind);
LearnerKind parse_learner_kind(std::string_view name);

struct LearnerSpec {
  LearnerKind kind = LearnerKind::LogisticRegression;
  nlohmann::json hyper = nlohmann::json::object();  // overrides; absent keys use defaults

  /// Spec with every hyper-parameter spelled out at its default.
  static LearnerSpec defaults(LearnerKind kind);
  /// Throws InvalidArgument on unknown keys, wrong types or out-of-range values.
  void validate() const;
  /// Defaults merged with the overrides.
  nlohmann::json resolved_hyper() const;
};

SvmParams svm_params(const LearnerSpec& spec);
ForestParams forest_params(const LearnerSpec& spec);
AdaBoostParams adaboost_params(const LearnerSpec& spec);
MlpParams mlp_params(const LearnerSpec& spec);
GbmParams gbm_params(const LearnerSpec& spec);
LogisticParams logistic_params(const LearnerSpec& spec);

struct TrainedLearner {
  LearnerSpec spec;
  std::shared_ptr<const ProbabilisticModel> model;
  std::string train_fingerprint;

  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& X) const;
  std::size_t input_dimension() const { return model->input_dimension(); }
};

TrainedLearner train_learner(const LearnerSpec& spec, const Eigen::MatrixXd& X, const Labels& y,
                             std::uint64_t seed, Execution exec = Execution::Parallel);

Eigen::VectorXd predict_proba(const TrainedLearner& learner, const Eigen::MatrixXd& X);

/// Fraction of rows whose thresholded probability (> 0.5) equals the label.
double accuracy(const Eigen::VectorXd& probabilities, const Labels& y);
double accuracy(const TrainedLearner& learner, const Eigen::MatrixXd& X, const Labels& y);

/// 16 hex digits of FNV-1a over the spec, data shape, values, labels and seed.
std::string training_fingerprint(const LearnerSpec& spec, const Eigen::MatrixXd& X, const Labels& y,
                                 std::uint64_t seed);

nlohmann::json learner_to_json(const TrainedLearner& learner);
/// Throws ParseError on malformed input.
TrainedLearner learner_from_json(const nlohmann::json& j);

}  // namespace stylebreach
