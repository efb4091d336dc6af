#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Sparse>

#include "stylebreach/learners/model.hpp"

namespace stylebreach {

using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class LogisticSolver {
  Newton,  // 1/2 ||[w, b]||^2 + C sum log-loss, intercept penalized
  Sag,     // mean log-loss + ||w||^2 / (2 C n), intercept free
};

struct LogisticParams {
  double C = 1.0;
  double tol = 1e-4;
  std::size_t max_iter = 100;
  LogisticSolver solver = LogisticSolver::Newton;
};

class LogisticModel final : public ProbabilisticModel {
 public:
  static LogisticModel fit(const Eigen::MatrixXd& X, const Labels& y, const LogisticParams& params = {},
                           std::uint64_t seed = 0);
  /// Stochastic average gradient on sparse rows; `seed` drives the sampling.
  static LogisticModel fit_sag(const SparseRows& X, const Labels& y, const LogisticParams& params,
                               std::uint64_t seed);

  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& X) const override;
  Eigen::VectorXd predict_proba(const SparseRows& X) const;
  std::size_t input_dimension() const override { return static_cast<std::size_t>(coef_.size()); }
  nlohmann::json to_json() const override;
  static LogisticModel from_json(const nlohmann::json& j);

  const Eigen::VectorXd& coef() const { return coef_; }
  double intercept() const { return intercept_; }
  std::size_t iterations() const { return iterations_; }
  bool converged() const { return converged_; }

 private:
  Eigen::VectorXd coef_;
  double intercept_ = 0.0;
  std::size_t iterations_ = 0;
  bool converged_ = false;
};

}  // namespace stylebreach
