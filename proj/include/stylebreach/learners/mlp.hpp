#pragma once

#include <cstddef>
#include <cstdint>

#include "stylebreach/learners/model.hpp"
#include "stylebreach/random.hpp"

namespace stylebreach {

struct MlpParams {
  std::size_t hidden = 100;
  double learning_rate = 1e-3;
  std::size_t batch_size = 200;
  std::size_t max_iter = 10000;  // epochs
  double alpha = 1e-4;           // L2 penalty
  double tol = 1e-4;
  std::size_t n_iter_no_change = 10;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// One hidden ReLU layer feeding a logistic output unit.
struct MlpNetwork {
  Eigen::MatrixXd W1;  // inputs x hidden
  Eigen::VectorXd b1;
  Eigen::VectorXd W2;  // hidden
  double b2 = 0.0;

  /// Glorot-uniform weights and biases.
  static MlpNetwork initialize(std::size_t inputs, std::size_t hidden, Rng& rng);

  std::size_t parameter_count() const;
  /// W1 (column-major), b1, W2, b2.
  Eigen::VectorXd flatten() const;
  void assign(const Eigen::VectorXd& flat);

  Eigen::VectorXd logits(const Eigen::MatrixXd& X) const;
  Eigen::VectorXd forward(const Eigen::MatrixXd& X) const;
};

/// Mean log-loss over the batch plus alpha / (2 n) times the squared weight
/// norm (biases unpenalized). Writes the gradient in flatten() order when
/// `gradient` is non-null.
double mlp_loss_and_gradient(const MlpNetwork& net, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                             double alpha, Eigen::VectorXd* gradient);

/// Trained with Adam on standardized inputs; stops once the epoch loss has
/// not improved by `tol` for more than `n_iter_no_change` epochs.
class MlpModel final : public ProbabilisticModel {
 public:
  static MlpModel fit(const Eigen::MatrixXd& X, const Labels& y, const MlpParams& params, std::uint64_t seed);

  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& X) const override;
  std::size_t input_dimension() const override { return static_cast<std::size_t>(scaler_.mean.size()); }
  nlohmann::json to_json() const override;
  static MlpModel from_json(const nlohmann::json& j);

  const MlpNetwork& network() const { return net_; }
  std::size_t epochs() const { return epochs_; }
  double final_loss() const { return final_loss_; }

 private:
  StandardScaler scaler_;
  MlpNetwork net_;
  std::size_t epochs_ = 0;
  double final_loss_ = 0.0;
};

}  // namespace stylebreach
