#include "stylebreach/learners.hpp"

#include <cmath>
#include <cstring>
#include <cstdio>

#include "stylebreach/error.hpp"

namespace stylebreach {
namespace {

nlohmann::json default_hyper(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::KernelMarginClassifier:
      return {{"C", 1.0}, {"gamma", 0.0}, {"tol", 1e-3}, {"class_weight", "balanced"}, {"max_iter", 10'000'000}};
    case LearnerKind::RandomForest:
      return {{"n_estimators", 300}, {"bootstrap", true}, {"max_features", 0}, {"max_depth", 0},
              {"min_samples_leaf", 1}};
    case LearnerKind::AdaBoostTrees:
      return {{"n_estimators", 300}, {"learning_rate", 1.0}, {"max_depth", 1}};
    case LearnerKind::MultiLayerPerceptron:
      return {{"hidden", 100},   {"learning_rate", 1e-3}, {"batch_size", 200},       {"max_iter", 10000},
              {"alpha", 1e-4},   {"tol", 1e-4},           {"n_iter_no_change", 10}};
    case LearnerKind::GradientBoostedTrees:
      return {{"n_estimators", 100}, {"num_leaves", 31},       {"learning_rate", 0.1},
              {"feature_fraction", 0.6}, {"lambda_l1", 1.0},   {"lambda_l2", 1.0},
              {"min_data_in_leaf", 20},  {"min_sum_hessian", 1e-3}, {"max_bin", 255}};
    case LearnerKind::LogisticRegression:
      return {{"C", 1.0}, {"tol", 1e-4}, {"max_iter", 100}, {"solver", "newton"}};
  }
  throw InvalidArgument("unknown learner kind");
}

template <typename T>
T get(const nlohmann::json& hyper, const char* key) {
  return hyper.at(key).get<T>();
}

void fnv1a(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 0x100000001B3ULL;
  }
}

}  // namespace

std::string_view learner_kind_name(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::KernelMarginClassifier: return "svm";
    case LearnerKind::RandomForest: return "random_forest";
    case LearnerKind::AdaBoostTrees: return "adaboost";
    case LearnerKind::MultiLayerPerceptron: return "mlp";
    case LearnerKind::GradientBoostedTrees: return "gbm";
    case LearnerKind::LogisticRegression: return "logistic_regression";
  }
  return "?";
}

LearnerKind parse_learner_kind(std::string_view name) {
  for (const auto kind : kAllLearnerKinds) {
    if (learner_kind_name(kind) == name) return kind;
  }
  throw InvalidArgument("unknown learner kind '" + std::string(name) + "'");
}

LearnerSpec LearnerSpec::defaults(LearnerKind kind) { return {kind, default_hyper(kind)}; }

nlohmann::json LearnerSpec::resolved_hyper() const {
  validate();
  nlohmann::json merged = default_hyper(kind);
  for (const auto& [key, value] : hyper.items()) merged[key] = value;
  return merged;
}

void LearnerSpec::validate() const {
  if (!hyper.is_object()) throw InvalidArgument("learner hyper-parameters must be a key/value map");
  const nlohmann::json defaults = default_hyper(kind);
  const std::string name(learner_kind_name(kind));
  for (const auto& [key, value] : hyper.items()) {
    if (!defaults.contains(key)) throw InvalidArgument(name + ": unknown hyper-parameter '" + key + "'");
    const auto& reference = defaults.at(key);
    bool ok = false;
    if (reference.is_boolean()) {
      ok = value.is_boolean();
    } else if (reference.is_number_integer()) {
      ok = value.is_number_integer() && value.get<long long>() >= 0;
    } else if (reference.is_number()) {
      ok = value.is_number() && std::isfinite(value.get<double>()) && value.get<double>() >= 0;
    } else if (reference.is_string()) {
      ok = value.is_string();
    }
    if (!ok) throw InvalidArgument(name + ": invalid value for '" + key + "': " + value.dump());
  }
  if (kind == LearnerKind::KernelMarginClassifier && hyper.contains("class_weight")) {
    const auto cw = hyper.at("class_weight").get<std::string>();
    if (cw != "balanced" && cw != "none") throw InvalidArgument("svm: class_weight must be 'balanced' or 'none'");
  }
  if (kind == LearnerKind::LogisticRegression && hyper.contains("solver")) {
    const auto s = hyper.at("solver").get<std::string>();
    if (s != "newton" && s != "sag") throw InvalidArgument("logistic_regression: solver must be 'newton' or 'sag'");
  }
}

SvmParams svm_params(const LearnerSpec& spec) {
  const auto h = spec.resolved_hyper();
  SvmParams p;
  p.C = get<double>(h, "C");
  p.gamma = get<double>(h, "gamma");
  p.tol = get<double>(h, "tol");
  p.balanced = get<std::string>(h, "class_weight") == "balanced";
  p.max_iter = get<std::size_t>(h, "max_iter");
  return p;
}

ForestParams forest_params(const LearnerSpec& spec) {
  const auto h = spec.resolved_hyper();
  ForestParams p;
  p.n_estimators = get<std::size_t>(h, "n_estimators");
  p.bootstrap = get<bool>(h, "bootstrap");
  p.max_features = get<std::size_t>(h, "max_features");
  p.max_depth = get<std::size_t>(h, "max_depth");
  p.min_samples_leaf = get<std::size_t>(h, "min_samples_leaf");
  return p;
}

AdaBoostParams adaboost_params(const LearnerSpec& spec) {
  const auto h = spec.resolved_hyper();
  AdaBoostParams p;
  p.n_estimators = get<std::size_t>(h, "n_estimators");
  p.learning_rate = get<double>(h, "learning_rate");
  p.max_depth = get<std::size_t>(h, "max_depth");
  return p;
}

MlpParams mlp_params(const LearnerSpec& spec) {
  const auto h = spec.resolved_hyper();
  MlpParams p;
  p.hidden = get<std::size_t>(h, "hidden");
  p.learning_rate = get<double>(h, "learning_rate");
  p.batch_size = get<std::size_t>(h, "batch_size");
  p.max_iter = get<std::size_t>(h, "max_iter");
  p.alpha = get<double>(h, "alpha");
  p.tol = get<double>(h, "tol");
  p.n_iter_no_change = get<std::size_t>(h, "n_iter_no_change");
  return p;
}

GbmParams gbm_params(const LearnerSpec& spec) {
  const auto h = spec.resolved_hyper();
  GbmParams p;
  p.n_estimators = get<std::size_t>(h, "n_estimators");
  p.num_leaves = get<std::size_t>(h, "num_leaves");
  p.learning_rate = get<double>(h, "learning_rate");
  p.feature_fraction = get<double>(h, "feature_fraction");
  p.lambda_l1 = get<double>(h, "lambda_l1");
  p.lambda_l2 = get<double>(h, "lambda_l2");
  p.min_data_in_leaf = get<std::size_t>(h, "min_data_in_leaf");
  p.min_sum_hessian = get<double>(h, "min_sum_hessian");
  p.max_bin = get<std::size_t>(h, "max_bin");
  return p;
}

LogisticParams logistic_params(const LearnerSpec& spec) {
  const auto h = spec.resolved_hyper();
  LogisticParams p;
  p.C = get<double>(h, "C");
  p.tol = get<double>(h, "tol");
  p.max_iter = get<std::size_t>(h, "max_iter");
  p.solver = get<std::string>(h, "solver") == "sag" ? LogisticSolver::Sag : LogisticSolver::Newton;
  return p;
}

Eigen::VectorXd TrainedLearner::predict_proba(const Eigen::MatrixXd& X) const {
  if (!model) throw InvalidArgument("learner is not trained");
  return model->predict_proba(X);
}

TrainedLearner train_learner(const LearnerSpec& spec, const Eigen::MatrixXd& X, const Labels& y,
                             std::uint64_t seed, Execution exec) {
  spec.validate();
  check_training_data(X, y);
  TrainedLearner out;
  out.spec = spec;
  out.train_fingerprint = training_fingerprint(spec, X, y, seed);
  switch (spec.kind) {
    case LearnerKind::KernelMarginClassifier:
      out.model = std::make_shared<SvmModel>(SvmModel::fit(X, y, svm_params(spec), exec));
      break;
    case LearnerKind::RandomForest:
      out.model = std::make_shared<RandomForestModel>(RandomForestModel::fit(X, y, forest_params(spec), seed, exec));
      break;
    case LearnerKind::AdaBoostTrees:
      out.model = std::make_shared<AdaBoostModel>(AdaBoostModel::fit(X, y, adaboost_params(spec)));
      break;
    case LearnerKind::MultiLayerPerceptron:
      out.model = std::make_shared<MlpModel>(MlpModel::fit(X, y, mlp_params(spec), seed));
      break;
    case LearnerKind::GradientBoostedTrees:
      out.model = std::make_shared<GbmModel>(GbmModel::fit(X, y, gbm_params(spec), seed, exec));
      break;
    case LearnerKind::LogisticRegression:
      out.model = std::make_shared<LogisticModel>(LogisticModel::fit(X, y, logistic_params(spec), seed));
      break;
  }
  return out;
}

Eigen::VectorXd predict_proba(const TrainedLearner& learner, const Eigen::MatrixXd& X) {
  return learner.predict_proba(X);
}

double accuracy(const Eigen::VectorXd& probabilities, const Labels& y) {
  if (probabilities.size() != y.size()) throw InvalidArgument("accuracy: prediction and label counts differ");
  if (y.size() == 0) throw InvalidArgument("accuracy: no rows");
  Eigen::Index correct = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) correct += ((probabilities[i] > 0.5 ? 1 : 0) == y[i]) ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(y.size());
}

double accuracy(const TrainedLearner& learner, const Eigen::MatrixXd& X, const Labels& y) {
  if (X.rows() != y.size()) throw InvalidArgument("accuracy: feature rows and labels differ in length");
  return accuracy(learner.predict_proba(X), y);
}

std::string training_fingerprint(const LearnerSpec& spec, const Eigen::MatrixXd& X, const Labels& y,
                                 std::uint64_t seed) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  const std::string head = std::string(learner_kind_name(spec.kind)) + spec.resolved_hyper().dump();
  fnv1a(h, head.data(), head.size());
  const std::int64_t shape[2] = {X.rows(), X.cols()};
  fnv1a(h, shape, sizeof(shape));
  fnv1a(h, X.data(), sizeof(double) * static_cast<std::size_t>(X.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const std::int32_t label = y[i];
    fnv1a(h, &label, sizeof(label));
  }
  fnv1a(h, &seed, sizeof(seed));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json learner_to_json(const TrainedLearner& learner) {
  if (!learner.model) throw InvalidArgument("learner is not trained");
  return {{"kind", learner_kind_name(learner.spec.kind)},
          {"hyper", learner.spec.hyper},
          {"fingerprint", learner.train_fingerprint},
          {"parameters", learner.model->to_json()}};
}

TrainedLearner learner_from_json(const nlohmann::json& j) {
  try {
    TrainedLearner out;
    out.spec.kind = parse_learner_kind(j.at("kind").get<std::string>());
    out.spec.hyper = j.at("hyper");
    out.spec.validate();
    out.train_fingerprint = j.at("fingerprint").get<std::string>();
    const auto& p = j.at("parameters");
    switch (out.spec.kind) {
      case LearnerKind::KernelMarginClassifier: out.model = std::make_shared<SvmModel>(SvmModel::from_json(p)); break;
      case LearnerKind::RandomForest:
        out.model = std::make_shared<RandomForestModel>(RandomForestModel::from_json(p));
        break;
      case LearnerKind::AdaBoostTrees: out.model = std::make_shared<AdaBoostModel>(AdaBoostModel::from_json(p)); break;
      case LearnerKind::MultiLayerPerceptron: out.model = std::make_shared<MlpModel>(MlpModel::from_json(p)); break;
      case LearnerKind::GradientBoostedTrees: out.model = std::make_shared<GbmModel>(GbmModel::from_json(p)); break;
      case LearnerKind::LogisticRegression:
        out.model = std::make_shared<LogisticModel>(LogisticModel::from_json(p));
        break;
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("learner: malformed model: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("learner: ") + e.what());
  }
}

}  // namespace stylebreach
