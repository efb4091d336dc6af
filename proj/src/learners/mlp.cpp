#include "stylebreach/learners/mlp.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include <spdlog/spdlog.h>

#include "stylebreach/error.hpp"

namespace stylebreach {
namespace {

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

MlpNetwork MlpNetwork::initialize(std::size_t inputs, std::size_t hidden, Rng& rng) {
  MlpNetwork net;
  const auto d = static_cast<Eigen::Index>(inputs);
  const auto h = static_cast<Eigen::Index>(hidden);
  const double bound1 = std::sqrt(6.0 / static_cast<double>(inputs + hidden));
  const double bound2 = std::sqrt(6.0 / static_cast<double>(hidden + 1));
  net.W1.resize(d, h);
  for (Eigen::Index c = 0; c < h; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) net.W1(r, c) = rng.uniform(-bound1, bound1);
  }
  net.b1.resize(h);
  for (Eigen::Index c = 0; c < h; ++c) net.b1[c] = rng.uniform(-bound1, bound1);
  net.W2.resize(h);
  for (Eigen::Index c = 0; c < h; ++c) net.W2[c] = rng.uniform(-bound2, bound2);
  net.b2 = rng.uniform(-bound2, bound2);
  return net;
}

std::size_t MlpNetwork::parameter_count() const {
  return static_cast<std::size_t>(W1.size() + b1.size() + W2.size() + 1);
}

Eigen::VectorXd MlpNetwork::flatten() const {
  Eigen::VectorXd flat(static_cast<Eigen::Index>(parameter_count()));
  flat << Eigen::Map<const Eigen::VectorXd>(W1.data(), W1.size()), b1, W2, b2;
  return flat;
}

void MlpNetwork::assign(const Eigen::VectorXd& flat) {
  if (static_cast<std::size_t>(flat.size()) != parameter_count()) {
    throw InvalidArgument("mlp: parameter vector has the wrong length");
  }
  Eigen::Index at = 0;
  W1 = Eigen::Map<const Eigen::MatrixXd>(flat.data(), W1.rows(), W1.cols());
  at += W1.size();
  b1 = flat.segment(at, b1.size());
  at += b1.size();
  W2 = flat.segment(at, W2.size());
  at += W2.size();
  b2 = flat[at];
}

Eigen::VectorXd MlpNetwork::logits(const Eigen::MatrixXd& X) const {
  const Eigen::MatrixXd H = ((X * W1).rowwise() + b1.transpose()).cwiseMax(0.0);
  return (H * W2).array() + b2;
}

Eigen::VectorXd MlpNetwork::forward(const Eigen::MatrixXd& X) const {
  Eigen::VectorXd z = logits(X);
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = sigmoid(z[i]);
  return z;
}

double mlp_loss_and_gradient(const MlpNetwork& net, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                             double alpha, Eigen::VectorXd* gradient) {
  const auto n = static_cast<double>(X.rows());
  const Eigen::MatrixXd Z1 = (X * net.W1).rowwise() + net.b1.transpose();
  const Eigen::MatrixXd H = Z1.cwiseMax(0.0);
  const Eigen::VectorXd z = (H * net.W2).array() + net.b2;

  double loss = 0.0;
  Eigen::VectorXd dz(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    loss += softplus(z[i]) - y[i] * z[i];
    dz[i] = (sigmoid(z[i]) - y[i]) / n;
  }
  loss /= n;
  loss += 0.5 * alpha / n * (net.W1.squaredNorm() + net.W2.squaredNorm());

  if (gradient != nullptr) {
    const Eigen::VectorXd gW2 = H.transpose() * dz + (alpha / n) * net.W2;
    const double gb2 = dz.sum();
    Eigen::MatrixXd dH = dz * net.W2.transpose();
    dH = (Z1.array() > 0.0).select(dH, 0.0);
    const Eigen::MatrixXd gW1 = X.transpose() * dH + (alpha / n) * net.W1;
    const Eigen::VectorXd gb1 = dH.colwise().sum().transpose();
    gradient->resize(static_cast<Eigen::Index>(net.parameter_count()));
    *gradient << Eigen::Map<const Eigen::VectorXd>(gW1.data(), gW1.size()), gb1, gW2, gb2;
  }
  return loss;
}

MlpModel MlpModel::fit(const Eigen::MatrixXd& X, const Labels& y, const MlpParams& params, std::uint64_t seed) {
  check_training_data(X, y);
  if (params.hidden == 0 || params.batch_size == 0 || params.max_iter == 0) {
    throw InvalidArgument("mlp: hidden, batch_size and max_iter must be positive");
  }
  if (!(params.learning_rate > 0)) throw InvalidArgument("mlp: learning_rate must be positive");

  MlpModel model;
  model.scaler_ = StandardScaler::fit(X);
  const Eigen::MatrixXd Xs = model.scaler_.transform(X);
  const Eigen::VectorXd yd = y.cast<double>();
  const auto n = static_cast<std::size_t>(X.rows());
  const std::size_t batch = std::min(params.batch_size, n);

  Rng rng(seed);
  model.net_ = MlpNetwork::initialize(static_cast<std::size_t>(X.cols()), params.hidden, rng);
  Eigen::VectorXd theta = model.net_.flatten();
  Eigen::VectorXd m = Eigen::VectorXd::Zero(theta.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(theta.size());
  Eigen::VectorXd grad;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  double best_loss = std::numeric_limits<double>::infinity();
  std::size_t no_improvement = 0;
  std::size_t step = 0;
  Eigen::MatrixXd Xb;
  Eigen::VectorXd yb;
  std::size_t epoch = 0;
  for (; epoch < params.max_iter; ++epoch) {
    rng.shuffle(order);
    double accumulated = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t stop = std::min(n, start + batch);
      const auto rows = static_cast<Eigen::Index>(stop - start);
      Xb.resize(rows, Xs.cols());
      yb.resize(rows);
      for (std::size_t k = start; k < stop; ++k) {
        const auto r = static_cast<Eigen::Index>(k - start);
        Xb.row(r) = Xs.row(static_cast<Eigen::Index>(order[k]));
        yb[r] = yd[static_cast<Eigen::Index>(order[k])];
      }
      accumulated += mlp_loss_and_gradient(model.net_, Xb, yb, params.alpha, &grad) * static_cast<double>(rows);

      ++step;
      m = params.beta1 * m + (1.0 - params.beta1) * grad;
      v = params.beta2 * v + (1.0 - params.beta2) * grad.cwiseProduct(grad);
      const double t = static_cast<double>(step);
      const double lr = params.learning_rate * std::sqrt(1.0 - std::pow(params.beta2, t)) /
                        (1.0 - std::pow(params.beta1, t));
      theta.array() -= lr * m.array() / (v.array().sqrt() + params.epsilon);
      model.net_.assign(theta);
    }
    const double loss = accumulated / static_cast<double>(n);
    model.final_loss_ = loss;
    if (loss > best_loss - params.tol) {
      ++no_improvement;
    } else {
      no_improvement = 0;
    }
    best_loss = std::min(best_loss, loss);
    if (no_improvement > params.n_iter_no_change) {
      ++epoch;
      break;
    }
  }
  if (epoch == params.max_iter) spdlog::warn("mlp: reached max_iter={} before convergence", params.max_iter);
  model.epochs_ = epoch;
  return model;
}

Eigen::VectorXd MlpModel::predict_proba(const Eigen::MatrixXd& X) const {
  check_prediction_input(X, input_dimension());
  return net_.forward(scaler_.transform(X));
}

nlohmann::json MlpModel::to_json() const {
  return {{"scaler", scaler_.to_json()}, {"W1", matrix_to_json(net_.W1)}, {"b1", vector_to_json(net_.b1)},
          {"W2", vector_to_json(net_.W2)}, {"b2", net_.b2}};
}

MlpModel MlpModel::from_json(const nlohmann::json& j) {
  MlpModel m;
  m.scaler_ = StandardScaler::from_json(j.at("scaler"));
  m.net_.W1 = matrix_from_json(j.at("W1"));
  m.net_.b1 = vector_from_json(j.at("b1"));
  m.net_.W2 = vector_from_json(j.at("W2"));
  m.net_.b2 = j.at("b2").get<double>();
  if (m.net_.W1.rows() != m.scaler_.mean.size() || m.net_.W1.cols() != m.net_.b1.size() ||
      m.net_.W2.size() != m.net_.b1.size()) {
    throw ParseError("mlp: inconsistent layer shapes");
  }
  return m;
}

}  // namespace stylebreach
