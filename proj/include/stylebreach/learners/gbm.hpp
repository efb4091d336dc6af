#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "stylebreach/learners/model.hpp"
#include "stylebreach/learners/tree.hpp"
#include "stylebreach/parallel.hpp"

namespace stylebreach {

struct GbmParams {
  std::size_t n_estimators = 100;
  std::size_t num_leaves = 31;
  double learning_rate = 0.1;
  double feature_fraction = 0.6;
  double lambda_l1 = 1.0;
  double lambda_l2 = 1.0;
  std::size_t min_data_in_leaf = 20;
  double min_sum_hessian = 1e-3;
  std::size_t max_bin = 255;
  double min_gain_to_split = 0.0;
};

/// Per-feature histogram bins. A value x falls in the first bin b with
/// x <= upper_bounds[f][b]; the last bin is unbounded.
struct BinnedMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<double>> upper_bounds;
  std::vector<std::uint16_t> bins;  // column-major

  static BinnedMatrix build(const Eigen::MatrixXd& X, std::size_t max_bin);
  std::size_t bin_count(std::size_t feature) const { return upper_bounds[feature].size() + 1; }
  std::uint16_t bin(std::size_t row, std::size_t feature) const { return bins[feature * rows + row]; }
};

/// Gradient-boosted trees for binary log-loss, grown leaf-wise on
/// histograms with L1/L2-regularized leaf values. Each tree searches a
/// seeded subset of features; the per-leaf split search runs over features
/// in parallel and reduces in feature order.
class GbmModel final : public ProbabilisticModel {
 public:
  static GbmModel fit(const Eigen::MatrixXd& X, const Labels& y, const GbmParams& params, std::uint64_t seed,
                      Execution exec = Execution::Parallel);

  Eigen::VectorXd raw_score(const Eigen::MatrixXd& X) const;
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& X) const override;
  std::size_t input_dimension() const override { return dimension_; }
  nlohmann::json to_json() const override;
  static GbmModel from_json(const nlohmann::json& j);

  double prior() const { return prior_; }
  double init_score() const { return init_score_; }
  const std::vector<std::vector<DecisionTree::Node>>& trees() const { return trees_; }

 private:
  std::vector<std::vector<DecisionTree::Node>> trees_;  // leaf value = shrunk output
  double prior_ = 0.5;
  double init_score_ = 0.0;
  std::size_t dimension_ = 0;
};

}  // namespace stylebreach
