#include "stylebreach/learners/svm.hpp"

#include <cmath>
#include <limits>

#include <spdlog/spdlog.h>

#include "stylebreach/error.hpp"

namespace stylebreach {
namespace {

constexpr double kTau = 1e-12;

double signed_label(int label) { return label == 1 ? 1.0 : -1.0; }

bool in_up(double y, double a, double c) { return (y > 0 && a < c) || (y < 0 && a > 0); }
bool in_low(double y, double a, double c) { return (y > 0 && a > 0) || (y < 0 && a < c); }

double platt_objective(const Eigen::VectorXd& f, const Eigen::VectorXd& t, double A, double B) {
  double value = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double fApB = f[i] * A + B;
    if (fApB >= 0) {
      value += t[i] * fApB + std::log1p(std::exp(-fApB));
    } else {
      value += (t[i] - 1.0) * fApB + std::log1p(std::exp(fApB));
    }
  }
  return value;
}

}  // namespace

Eigen::MatrixXd rbf_kernel(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double gamma,
                           Execution exec) {
  if (A.cols() != B.cols()) throw InvalidArgument("rbf_kernel: column counts differ");
  Eigen::MatrixXd K(A.rows(), B.rows());
  for_each_index(static_cast<std::size_t>(A.rows()), exec, [&](std::size_t r) {
    const auto i = static_cast<Eigen::Index>(r);
    for (Eigen::Index j = 0; j < B.rows(); ++j) {
      K(i, j) = std::exp(-gamma * (A.row(i) - B.row(j)).squaredNorm());
    }
  });
  return K;
}

std::pair<double, double> fit_platt(const Eigen::VectorXd& decision, const Labels& y) {
  double prior1 = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) prior1 += y[i];
  const double prior0 = static_cast<double>(y.size()) - prior1;
  const double hi = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo = 1.0 / (prior0 + 2.0);
  Eigen::VectorXd t(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) t[i] = y[i] == 1 ? hi : lo;

  constexpr double kMinStep = 1e-10;
  constexpr double kSigma = 1e-12;
  constexpr double kEps = 1e-5;
  double A = 0.0;
  double B = std::log((prior0 + 1.0) / (prior1 + 1.0));
  double fval = platt_objective(decision, t, A, B);

  for (int iter = 0; iter < 100; ++iter) {
    double h11 = kSigma, h22 = kSigma, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (Eigen::Index i = 0; i < decision.size(); ++i) {
      const double fApB = decision[i] * A + B;
      double p, q;
      if (fApB >= 0) {
        p = std::exp(-fApB) / (1.0 + std::exp(-fApB));
        q = 1.0 / (1.0 + std::exp(-fApB));
      } else {
        p = 1.0 / (1.0 + std::exp(fApB));
        q = std::exp(fApB) / (1.0 + std::exp(fApB));
      }
      const double d2 = p * q;
      h11 += decision[i] * decision[i] * d2;
      h22 += d2;
      h21 += decision[i] * d2;
      const double d1 = t[i] - p;
      g1 += decision[i] * d1;
      g2 += d1;
    }
    if (std::abs(g1) < kEps && std::abs(g2) < kEps) break;

    const double det = h11 * h22 - h21 * h21;
    const double dA = -(h22 * g1 - h21 * g2) / det;
    const double dB = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * dA + g2 * dB;
    double step = 1.0;
    while (step >= kMinStep) {
      const double newA = A + step * dA;
      const double newB = B + step * dB;
      const double newf = platt_objective(decision, t, newA, newB);
      if (newf < fval + 1e-4 * step * gd) {
        A = newA;
        B = newB;
        fval = newf;
        break;
      }
      step /= 2.0;
    }
    if (step < kMinStep) break;
  }
  return {A, B};
}

double svm_kkt_violation(const Eigen::MatrixXd& K, const Labels& y, const Eigen::VectorXd& alpha,
                         const Eigen::VectorXd& bounds) {
  const Eigen::Index n = y.size();
  double up = -std::numeric_limits<double>::infinity();
  double low = std::numeric_limits<double>::infinity();
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yt = signed_label(y[t]);
    double grad = -1.0;
    for (Eigen::Index s = 0; s < n; ++s) grad += yt * signed_label(y[s]) * K(t, s) * alpha[s];
    const double v = -yt * grad;
    if (in_up(yt, alpha[t], bounds[t])) up = std::max(up, v);
    if (in_low(yt, alpha[t], bounds[t])) low = std::min(low, v);
  }
  return std::max(0.0, up - low);
}

SvmModel SvmModel::fit(const Eigen::MatrixXd& X, const Labels& y, const SvmParams& params,
                       Execution exec) {
  check_training_data(X, y);
  if (!(params.C > 0)) throw InvalidArgument("svm: C must be positive");
  if (!(params.tol > 0)) throw InvalidArgument("svm: tol must be positive");

  SvmModel model;
  model.scaler_ = StandardScaler::fit(X);
  const Eigen::MatrixXd Xs = model.scaler_.transform(X);
  if (params.gamma > 0) {
    model.gamma_ = params.gamma;
  } else {
    const double mean = Xs.mean();
    const double var = (Xs.array() - mean).square().mean();
    model.gamma_ = var > 0 ? 1.0 / (static_cast<double>(Xs.cols()) * var) : 1.0;
  }

  const Eigen::Index n = X.rows();
  const Eigen::MatrixXd K = rbf_kernel(Xs, Xs, model.gamma_, exec);
  Eigen::VectorXd ys(n);
  double positives = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    ys[i] = signed_label(y[i]);
    positives += y[i];
  }
  const double negatives = static_cast<double>(n) - positives;
  Eigen::VectorXd C(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double weight = 1.0;
    if (params.balanced) weight = static_cast<double>(n) / (2.0 * (y[i] == 1 ? positives : negatives));
    C[i] = params.C * weight;
  }

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd G = Eigen::VectorXd::Constant(n, -1.0);
  const auto Q = [&](Eigen::Index i, Eigen::Index j) { return ys[i] * ys[j] * K(i, j); };

  std::size_t iter = 0;
  const std::size_t max_iter = std::max<std::size_t>(params.max_iter, 100 * static_cast<std::size_t>(n));
  for (; iter < max_iter; ++iter) {
    double gmax = -std::numeric_limits<double>::infinity();
    Eigen::Index i = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (in_up(ys[t], alpha[t], C[t]) && -ys[t] * G[t] > gmax) {
        gmax = -ys[t] * G[t];
        i = t;
      }
    }
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best_obj = std::numeric_limits<double>::infinity();
    Eigen::Index j = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (!in_low(ys[t], alpha[t], C[t])) continue;
      gmax2 = std::max(gmax2, ys[t] * G[t]);
      if (i < 0) continue;
      const double grad_diff = gmax + ys[t] * G[t];
      if (grad_diff <= 0) continue;
      double quad = K(i, i) + K(t, t) - 2.0 * K(i, t);
      if (quad <= 0) quad = kTau;
      const double obj = -(grad_diff * grad_diff) / quad;
      if (obj < best_obj) {
        best_obj = obj;
        j = t;
      }
    }
    if (i < 0 || j < 0 || gmax + gmax2 < params.tol) break;

    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    const double Ci = C[i];
    const double Cj = C[j];
    double ai = old_ai;
    double aj = old_aj;
    double quad = K(i, i) + K(j, j) - 2.0 * K(i, j);
    if (quad <= 0) quad = kTau;
    if (ys[i] != ys[j]) {
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0) {
        if (aj < 0) {
          aj = 0;
          ai = diff;
        }
      } else if (ai < 0) {
        ai = 0;
        aj = -diff;
      }
      if (diff > Ci - Cj) {
        if (ai > Ci) {
          ai = Ci;
          aj = Ci - diff;
        }
      } else if (aj > Cj) {
        aj = Cj;
        ai = Cj + diff;
      }
    } else {
      const double delta = (G[i] - G[j]) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > Ci) {
        if (ai > Ci) {
          ai = Ci;
          aj = sum - Ci;
        }
      } else if (aj < 0) {
        aj = 0;
        ai = sum;
      }
      if (sum > Cj) {
        if (aj > Cj) {
          aj = Cj;
          ai = sum - Cj;
        }
      } else if (ai < 0) {
        ai = 0;
        aj = sum;
      }
    }
    alpha[i] = ai;
    alpha[j] = aj;
    const double dai = ai - old_ai;
    const double daj = aj - old_aj;
    for (Eigen::Index k = 0; k < n; ++k) G[k] += Q(i, k) * dai + Q(j, k) * daj;
  }
  if (iter == max_iter) spdlog::warn("svm: reached max_iter={} before convergence", max_iter);
  model.iterations_ = iter;

  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t free_count = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yG = ys[t] * G[t];
    if (alpha[t] >= C[t]) {
      if (ys[t] < 0) ub = std::min(ub, yG); else lb = std::max(lb, yG);
    } else if (alpha[t] <= 0) {
      if (ys[t] > 0) ub = std::min(ub, yG); else lb = std::max(lb, yG);
    } else {
      ++free_count;
      sum_free += yG;
    }
  }
  model.rho_ = free_count > 0 ? sum_free / static_cast<double>(free_count) : (ub + lb) / 2.0;

  std::vector<Eigen::Index> support;
  for (Eigen::Index t = 0; t < n; ++t) {
    if (alpha[t] > 0) support.push_back(t);
  }
  model.support_.resize(static_cast<Eigen::Index>(support.size()), Xs.cols());
  model.coef_.resize(static_cast<Eigen::Index>(support.size()));
  for (std::size_t s = 0; s < support.size(); ++s) {
    model.support_.row(static_cast<Eigen::Index>(s)) = Xs.row(support[s]);
    model.coef_[static_cast<Eigen::Index>(s)] = alpha[support[s]] * ys[support[s]];
  }
  model.alpha_ = alpha;
  model.bounds_ = C;

  Eigen::VectorXd train_decision(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    double f = -model.rho_;
    for (std::size_t s = 0; s < support.size(); ++s) {
      f += model.coef_[static_cast<Eigen::Index>(s)] * K(t, support[s]);
    }
    train_decision[t] = f;
  }
  std::tie(model.platt_a_, model.platt_b_) = fit_platt(train_decision, y);
  return model;
}

Eigen::VectorXd SvmModel::decision_function(const Eigen::MatrixXd& X) const {
  check_prediction_input(X, input_dimension());
  const Eigen::MatrixXd K = rbf_kernel(scaler_.transform(X), support_, gamma_, Execution::Serial);
  return (K * coef_).array() - rho_;
}

Eigen::VectorXd SvmModel::predict_proba(const Eigen::MatrixXd& X) const {
  Eigen::VectorXd f = decision_function(X);
  for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = sigmoid(-(platt_a_ * f[i] + platt_b_));
  return f;
}

nlohmann::json SvmModel::to_json() const {
  return {{"scaler", scaler_.to_json()}, {"gamma", gamma_},       {"rho", rho_},
          {"platt_a", platt_a_},         {"platt_b", platt_b_},   {"support", matrix_to_json(support_)},
          {"coef", vector_to_json(coef_)}};
}

SvmModel SvmModel::from_json(const nlohmann::json& j) {
  SvmModel m;
  m.scaler_ = StandardScaler::from_json(j.at("scaler"));
  m.gamma_ = j.at("gamma").get<double>();
  m.rho_ = j.at("rho").get<double>();
  m.platt_a_ = j.at("platt_a").get<double>();
  m.platt_b_ = j.at("platt_b").get<double>();
  m.support_ = matrix_from_json(j.at("support"));
  m.coef_ = vector_from_json(j.at("coef"));
  if (m.support_.rows() != m.coef_.size()) throw ParseError("svm: support/coef size mismatch");
  return m;
}

}  // namespace stylebreach
