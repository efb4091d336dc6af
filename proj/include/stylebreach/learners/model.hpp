#pragma once

#include <cstddef>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

namespace stylebreach {

/// Binary labels, 1 = "changed".
using Labels = Eigen::VectorXi;

/// A fitted binary classifier. Implementations are immutable after fitting,
/// so concurrent predict_proba calls are safe.
class ProbabilisticModel {
 public:
  virtual ~ProbabilisticModel() = default;

  /// Per-row probability of class 1.
  virtual Eigen::VectorXd predict_proba(const Eigen::MatrixXd& X) const = 0;
  virtual std::size_t input_dimension() const = 0;
  virtual nlohmann::json to_json() const = 0;
};

/// Throws InvalidArgument unless X and y agree in size, y holds only 0/1
/// with both classes present, and every feature is finite.
void check_training_data(const Eigen::MatrixXd& X, const Labels& y);

/// Throws InvalidArgument on a column-count mismatch or non-finite input.
void check_prediction_input(const Eigen::MatrixXd& X, std::size_t expected_columns);

/// Per-column centering and scaling to unit variance; constant columns
/// are only centered.
struct StandardScaler {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  static StandardScaler fit(const Eigen::MatrixXd& X);
  Eigen::MatrixXd transform(const Eigen::MatrixXd& X) const;

  nlohmann::json to_json() const;
  static StandardScaler from_json(const nlohmann::json& j);
};

double sigmoid(double z);

// JSON helpers for Eigen containers.
nlohmann::json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);

}  // namespace stylebreach
