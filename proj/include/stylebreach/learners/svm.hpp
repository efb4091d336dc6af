#pragma once

#include <cstddef>

#include "stylebreach/learners/model.hpp"
#include "stylebreach/parallel.hpp"

namespace stylebreach {

struct SvmParams {
  double C = 1.0;
  double gamma = 0.0;  // <= 0: 1 / (d * var(X)) on standardized inputs
  double tol = 1e-3;
  bool balanced = true;
  std::size_t max_iter = 10'000'000;
};

/// RBF Gram matrix K(i, j) = exp(-gamma ||a_i - b_j||^2).
Eigen::MatrixXd rbf_kernel(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double gamma,
                           Execution exec = Execution::Parallel);

/// Soft-margin kernel SVM trained by SMO with second-order working-set
/// selection, calibrated to probabilities with Platt scaling on the training
/// decision values.
class SvmModel final : public ProbabilisticModel {
 public:
  static SvmModel fit(const Eigen::MatrixXd& X, const Labels& y, const SvmParams& params = {},
                      Execution exec = Execution::Parallel);

  Eigen::VectorXd decision_function(const Eigen::MatrixXd& X) const;
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& X) const override;
  std::size_t input_dimension() const override { return static_cast<std::size_t>(scaler_.mean.size()); }
  nlohmann::json to_json() const override;
  static SvmModel from_json(const nlohmann::json& j);

  double gamma() const { return gamma_; }
  double rho() const { return rho_; }
  double platt_a() const { return platt_a_; }
  double platt_b() const { return platt_b_; }
  std::size_t support_vector_count() const { return static_cast<std::size_t>(coef_.size()); }
  std::size_t iterations() const { return iterations_; }

  /// Dual solution over the training rows: alpha_i and its upper bound C_i.
  const Eigen::VectorXd& training_alpha() const { return alpha_; }
  const Eigen::VectorXd& training_bounds() const { return bounds_; }

 private:
  StandardScaler scaler_;
  double gamma_ = 0.0;
  double rho_ = 0.0;
  double platt_a_ = 0.0;
  double platt_b_ = 0.0;
  Eigen::MatrixXd support_;   // standardized support vectors
  Eigen::VectorXd coef_;      // alpha_i * y_i
  Eigen::VectorXd alpha_;     // not persisted
  Eigen::VectorXd bounds_;    // not persisted
  std::size_t iterations_ = 0;
};

/// Maximal KKT violation m(alpha) - M(alpha) of a dual solution, recomputed
/// from scratch; y in {0,1}.
double svm_kkt_violation(const Eigen::MatrixXd& K, const Labels& y, const Eigen::VectorXd& alpha,
                         const Eigen::VectorXd& bounds);

/// Platt sigmoid fit (Lin, Lin and Weng's Newton method). Returns (A, B) with
/// P(y=1 | f) = 1 / (1 + exp(A f + B)).
std::pair<double, double> fit_platt(const Eigen::VectorXd& decision, const Labels& y);

}  // namespace stylebreach
