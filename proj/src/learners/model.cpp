#include "stylebreach/learners/model.hpp"

#include <cmath>

#include "stylebreach/error.hpp"

namespace stylebreach {

void check_training_data(const Eigen::MatrixXd& X, const Labels& y) {
  if (X.rows() != y.size()) {
    throw InvalidArgument("feature rows (" + std::to_string(X.rows()) + ") and labels (" +
                          std::to_string(y.size()) + ") differ");
  }
  if (X.rows() < 2) throw InvalidArgument("training needs at least two rows");
  if (X.cols() == 0) throw InvalidArgument("training needs at least one feature");
  Eigen::Index positives = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] != 0 && y[i] != 1) throw InvalidArgument("labels must be 0 or 1");
    positives += y[i];
  }
  if (positives == 0 || positives == y.size()) {
    throw InvalidArgument("training labels contain a single class");
  }
  if (!X.allFinite()) throw InvalidArgument("training features contain non-finite values");
}

void check_prediction_input(const Eigen::MatrixXd& X, std::size_t expected_columns) {
  if (static_cast<std::size_t>(X.cols()) != expected_columns) {
    throw InvalidArgument("expected " + std::to_string(expected_columns) + " feature columns, got " +
                          std::to_string(X.cols()));
  }
  if (!X.allFinite()) throw InvalidArgument("prediction input contains non-finite values");
}

StandardScaler StandardScaler::fit(const Eigen::MatrixXd& X) {
  StandardScaler s;
  s.mean = X.colwise().mean();
  s.scale.resize(X.cols());
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    const double var = (X.col(c).array() - s.mean[c]).square().mean();
    s.scale[c] = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return s;
}

Eigen::MatrixXd StandardScaler::transform(const Eigen::MatrixXd& X) const {
  return (X.rowwise() - mean).array().rowwise() / scale.array();
}

nlohmann::json StandardScaler::to_json() const {
  return {{"mean", vector_to_json(mean.transpose())}, {"scale", vector_to_json(scale.transpose())}};
}

StandardScaler StandardScaler::from_json(const nlohmann::json& j) {
  StandardScaler s;
  s.mean = vector_from_json(j.at("mean")).transpose();
  s.scale = vector_from_json(j.at("scale")).transpose();
  return s;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  std::vector<double> data(m.data(), m.data() + m.size());
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) throw ParseError("matrix size mismatch");
  return Eigen::Map<const Eigen::MatrixXd>(data.data(), rows, cols);
}

}  // namespace stylebreach
