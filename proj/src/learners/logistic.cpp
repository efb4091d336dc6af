#include "stylebreach/learners/logistic.hpp"

#include <cmath>

#include <spdlog/spdlog.h>

#include "stylebreach/error.hpp"
#include "stylebreach/random.hpp"

namespace stylebreach {
namespace {

double log1p_exp(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

void check_sparse_training(const SparseRows& X, const Labels& y) {
  if (X.rows() != y.size()) throw InvalidArgument("feature rows and labels differ in length");
  Eigen::Index positives = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] != 0 && y[i] != 1) throw InvalidArgument("labels must be 0 or 1");
    positives += y[i];
  }
  if (X.rows() < 2 || positives == 0 || positives == y.size()) {
    throw InvalidArgument("training labels contain a single class");
  }
  for (Eigen::Index k = 0; k < X.nonZeros(); ++k) {
    if (!std::isfinite(X.valuePtr()[k])) throw InvalidArgument("training features contain non-finite values");
  }
}

}  // namespace

LogisticModel LogisticModel::fit(const Eigen::MatrixXd& X, const Labels& y, const LogisticParams& params,
                                 std::uint64_t seed) {
  if (params.solver == LogisticSolver::Sag) {
    check_training_data(X, y);
    return fit_sag(X.sparseView(), y, params, seed);
  }
  check_training_data(X, y);
  if (!(params.C > 0) || !(params.tol > 0)) throw InvalidArgument("logistic: C and tol must be positive");

  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols() + 1;
  Eigen::MatrixXd Xa(n, d);
  Xa << X, Eigen::VectorXd::Ones(n);
  Eigen::VectorXd ys(n);
  Eigen::Index positives = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    ys[i] = y[i] == 1 ? 1.0 : -1.0;
    positives += y[i];
  }

  const auto objective = [&](const Eigen::VectorXd& w) {
    const Eigen::VectorXd margin = ys.cwiseProduct(Xa * w);
    double f = 0.5 * w.squaredNorm();
    for (Eigen::Index i = 0; i < n; ++i) f += params.C * log1p_exp(-margin[i]);
    return f;
  };
  const auto gradient = [&](const Eigen::VectorXd& w, Eigen::VectorXd& D) {
    const Eigen::VectorXd margin = ys.cwiseProduct(Xa * w);
    Eigen::VectorXd coeff(n);
    D.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double s = sigmoid(margin[i]);
      coeff[i] = params.C * (s - 1.0) * ys[i];
      D[i] = s * (1.0 - s);
    }
    return Eigen::VectorXd(w + Xa.transpose() * coeff);
  };

  const double balance = static_cast<double>(std::max<Eigen::Index>(std::min(positives, n - positives), 1)) /
                         static_cast<double>(n);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd D;
  Eigen::VectorXd g = gradient(w, D);
  const double g0 = g.norm();
  double f = objective(w);
  LogisticModel model;
  std::size_t iter = 0;
  for (; iter < params.max_iter; ++iter) {
    if (g.norm() <= params.tol * balance * g0) {
      model.converged_ = true;
      break;
    }
    Eigen::MatrixXd H = Xa.transpose() * (D.asDiagonal() * params.C) * Xa;
    H.diagonal().array() += 1.0;
    const Eigen::VectorXd step = -H.ldlt().solve(g);
    const double slope = g.dot(step);
    double t = 1.0;
    Eigen::VectorXd candidate = w + step;
    double fc = objective(candidate);
    while (fc > f + 1e-4 * t * slope && t > 1e-10) {
      t *= 0.5;
      candidate = w + t * step;
      fc = objective(candidate);
    }
    w = candidate;
    f = fc;
    g = gradient(w, D);
  }
  if (!model.converged_ && g.norm() <= params.tol * balance * g0) model.converged_ = true;
  if (!model.converged_) spdlog::debug("logistic: stopped after max_iter={}", params.max_iter);
  model.iterations_ = iter;
  model.coef_ = w.head(d - 1);
  model.intercept_ = w[d - 1];
  return model;
}

LogisticModel LogisticModel::fit_sag(const SparseRows& X, const Labels& y, const LogisticParams& params,
                                     std::uint64_t seed) {
  check_sparse_training(X, y);
  if (!(params.C > 0) || !(params.tol > 0)) throw InvalidArgument("logistic: C and tol must be positive");

  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  const double alpha = 1.0 / (params.C * static_cast<double>(n));
  double max_squared_sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) max_squared_sum = std::max(max_squared_sum, X.row(i).squaredNorm());
  const double step = 1.0 / (0.25 * (max_squared_sum + 1.0) + alpha);

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd sum_gradient = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd memory = Eigen::VectorXd::Zero(n);
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  double seen_count = 0.0;
  double b = 0.0;
  double intercept_sum_gradient = 0.0;
  Rng rng(seed);

  LogisticModel model;
  std::size_t epoch = 0;
  for (; epoch < params.max_iter; ++epoch) {
    const Eigen::VectorXd previous = w;
    const double previous_b = b;
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto i = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::size_t>(n)));
      if (!seen[static_cast<std::size_t>(i)]) {
        seen[static_cast<std::size_t>(i)] = true;
        seen_count += 1.0;
      }
      double z = b;
      for (SparseRows::InnerIterator it(X, i); it; ++it) z += it.value() * w[it.col()];
      const double grad = sigmoid(z) - y[i];
      const double correction = grad - memory[i];
      for (SparseRows::InnerIterator it(X, i); it; ++it) sum_gradient[it.col()] += correction * it.value();
      memory[i] = grad;
      w *= 1.0 - step * alpha;
      w -= (step / seen_count) * sum_gradient;
      intercept_sum_gradient += correction;
      b -= step * intercept_sum_gradient / seen_count;
    }
    const double max_change = std::max((w - previous).cwiseAbs().maxCoeff(), std::abs(b - previous_b));
    const double max_weight = std::max(w.cwiseAbs().maxCoeff(), std::abs(b));
    if (max_weight == 0.0 || max_change / max_weight <= params.tol) {
      model.converged_ = true;
      ++epoch;
      break;
    }
  }
  if (!model.converged_) spdlog::debug("logistic (sag): stopped after max_iter={}", params.max_iter);
  model.iterations_ = epoch;
  model.coef_ = w;
  model.intercept_ = b;
  return model;
}

Eigen::VectorXd LogisticModel::predict_proba(const Eigen::MatrixXd& X) const {
  check_prediction_input(X, input_dimension());
  Eigen::VectorXd z = (X * coef_).array() + intercept_;
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = sigmoid(z[i]);
  return z;
}

Eigen::VectorXd LogisticModel::predict_proba(const SparseRows& X) const {
  if (X.cols() != coef_.size()) throw InvalidArgument("logistic: column count mismatch");
  Eigen::VectorXd z = (X * coef_).array() + intercept_;
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = sigmoid(z[i]);
  return z;
}

nlohmann::json LogisticModel::to_json() const {
  return {{"coef", vector_to_json(coef_)}, {"intercept", intercept_}};
}

LogisticModel LogisticModel::from_json(const nlohmann::json& j) {
  LogisticModel m;
  m.coef_ = vector_from_json(j.at("coef"));
  m.intercept_ = j.at("intercept").get<double>();
  return m;
}

}  // namespace stylebreach
