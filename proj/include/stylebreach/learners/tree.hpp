#pragma once

#include <cstddef>
#include <vector>

#include "stylebreach/learners/model.hpp"
#include "stylebreach/parallel.hpp"
#include "stylebreach/random.hpp"

namespace stylebreach {

struct TreeParams {
  std::size_t max_depth = 0;  // 0: unlimited
  std::size_t min_samples_split = 2;
  std::size_t min_samples_leaf = 1;
  std::size_t max_features = 0;  // features examined per split; 0: all
};

/// Weighted CART classification tree (Gini). Splits are taken whenever a
/// valid one exists, even without impurity decrease, so distinct points are
/// always separated when depth allows.
class DecisionTree {
 public:
  struct Node {
    int feature = -1;  // -1 for leaves
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // weighted fraction of class 1

    bool operator==(const Node&) const = default;
  };

  /// Rows with zero weight are ignored. When max_features limits the search,
  /// candidate features are drawn from `rng`; otherwise `rng` is untouched.
  static DecisionTree fit(const Eigen::MatrixXd& X, const Labels& y, const Eigen::VectorXd& sample_weight,
                          const TreeParams& params, Rng& rng);

  double predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& X) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t depth() const;
  std::size_t leaf_count() const;

  nlohmann::json to_json() const;
  static DecisionTree from_json(const nlohmann::json& j);

  bool operator==(const DecisionTree&) const = default;

 private:
  std::vector<Node> nodes_;
};

/// Bootstrap multiplicities: n draws with replacement from [0, n).
Eigen::VectorXd bootstrap_weights(std::size_t n, Rng& rng);

struct ForestParams {
  std::size_t n_estimators = 300;
  bool bootstrap = true;
  std::size_t max_features = 0;  // 0: round(sqrt(d))
  std::size_t max_depth = 0;
  std::size_t min_samples_leaf = 1;
};

/// Tree t draws its bootstrap sample and feature subsets from
/// Rng(mix_seed(seed, t)), so serial and parallel training agree.
class RandomForestModel final : public ProbabilisticModel {
 public:
  static RandomForestModel fit(const Eigen::MatrixXd& X, const Labels& y, const ForestParams& params,
                               std::uint64_t seed, Execution exec = Execution::Parallel);

  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& X) const override;
  std::size_t input_dimension() const override { return dimension_; }
  nlohmann::json to_json() const override;
  static RandomForestModel from_json(const nlohmann::json& j);

  const std::vector<DecisionTree>& trees() const { return trees_; }

 private:
  std::vector<DecisionTree> trees_;
  std::size_t dimension_ = 0;
};

struct AdaBoostParams {
  std::size_t n_estimators = 300;
  double learning_rate = 1.0;
  std::size_t max_depth = 1;
};

/// Discrete AdaBoost (SAMME, two classes). P(class 1) is the logistic
/// function of the alpha-normalized vote.
class AdaBoostModel final : public ProbabilisticModel {
 public:
  static AdaBoostModel fit(const Eigen::MatrixXd& X, const Labels& y, const AdaBoostParams& params = {});

  Eigen::VectorXd decision_function(const Eigen::MatrixXd& X) const;
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& X) const override;
  std::size_t input_dimension() const override { return dimension_; }
  nlohmann::json to_json() const override;
  static AdaBoostModel from_json(const nlohmann::json& j);

  const std::vector<DecisionTree>& estimators() const { return trees_; }
  const std::vector<double>& estimator_weights() const { return alphas_; }
  /// Sample-weight sum after each round's renormalization (training only).
  const std::vector<double>& weight_sums() const { return weight_sums_; }

 private:
  std::vector<DecisionTree> trees_;
  std::vector<double> alphas_;
  std::vector<double> weight_sums_;
  std::size_t dimension_ = 0;
};

}  // namespace stylebreach
