#include "stylebreach/learners/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stylebreach/error.hpp"

namespace stylebreach {
namespace {

// Gini impurity of a node times its weight: 2 * W1 * W0 / W.
double weighted_gini(double weight, double positive) {
  if (weight <= 0) return 0.0;
  positive = std::clamp(positive, 0.0, weight);
  return 2.0 * positive * (weight - positive) / weight;
}

class TreeBuilder {
 public:
  TreeBuilder(const Eigen::MatrixXd& X, const Labels& y, const Eigen::VectorXd& w, const TreeParams& p,
              Rng& rng, std::vector<DecisionTree::Node>& nodes)
      : X_(X), y_(y), w_(w), p_(p), rng_(rng), nodes_(nodes) {}

  int build(const std::vector<Eigen::Index>& idx, std::size_t depth) {
    double W = 0.0, W1 = 0.0;
    std::size_t positives = 0;
    for (const auto i : idx) {
      W += w_[i];
      W1 += w_[i] * y_[i];
      positives += static_cast<std::size_t>(y_[i]);
    }
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    nodes_[id].value = W > 0 ? W1 / W : 0.0;

    const bool pure = positives == 0 || positives == idx.size();
    const std::size_t min_split = std::max(p_.min_samples_split, 2 * std::max<std::size_t>(p_.min_samples_leaf, 1));
    if (pure || (p_.max_depth > 0 && depth >= p_.max_depth) || idx.size() < min_split) return id;

    const auto d = static_cast<std::size_t>(X_.cols());
    std::vector<std::size_t> order;
    std::size_t budget = d;
    if (p_.max_features == 0 || p_.max_features >= d) {
      order.resize(d);
      std::iota(order.begin(), order.end(), 0);
    } else {
      order = rng_.sample_without_replacement(d, d);
      budget = p_.max_features;
    }

    const std::size_t min_leaf = std::max<std::size_t>(p_.min_samples_leaf, 1);
    double best_impurity = std::numeric_limits<double>::infinity();
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::pair<double, Eigen::Index>> sorted(idx.size());
    std::size_t examined = 0;
    for (const auto f : order) {
      if (examined >= budget) break;
      const auto col = static_cast<Eigen::Index>(f);
      for (std::size_t k = 0; k < idx.size(); ++k) sorted[k] = {X_(idx[k], col), idx[k]};
      std::sort(sorted.begin(), sorted.end());
      if (sorted.front().first == sorted.back().first) continue;
      ++examined;

      double WL = 0.0, WL1 = 0.0;
      for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
        const auto i = sorted[k].second;
        WL += w_[i];
        WL1 += w_[i] * y_[i];
        if (!(sorted[k + 1].first > sorted[k].first)) continue;
        const std::size_t nl = k + 1;
        const std::size_t nr = sorted.size() - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double impurity = weighted_gini(WL, WL1) + weighted_gini(W - WL, W1 - WL1);
        if (impurity < best_impurity) {
          best_impurity = impurity;
          best_feature = static_cast<int>(f);
          const double lo = sorted[k].first;
          const double hi = sorted[k + 1].first;
          double mid = lo + (hi - lo) / 2.0;
          if (!(mid < hi)) mid = lo;
          best_threshold = mid;
        }
      }
    }
    if (best_feature < 0) return id;

    std::vector<Eigen::Index> left, right;
    for (const auto i : idx) {
      (X_(i, best_feature) <= best_threshold ? left : right).push_back(i);
    }
    nodes_[id].feature = best_feature;
    nodes_[id].threshold = best_threshold;
    const int l = build(left, depth + 1);
    nodes_[id].left = l;
    const int r = build(right, depth + 1);
    nodes_[id].right = r;
    return id;
  }

 private:
  const Eigen::MatrixXd& X_;
  const Labels& y_;
  const Eigen::VectorXd& w_;
  const TreeParams& p_;
  Rng& rng_;
  std::vector<DecisionTree::Node>& nodes_;
};

void check_same_rows(const Eigen::MatrixXd& X, const Labels& y) {
  if (X.rows() != y.size()) throw InvalidArgument("feature rows and labels differ in length");
  if (X.rows() == 0) throw InvalidArgument("cannot fit a tree on zero rows");
}

}  // namespace

DecisionTree DecisionTree::fit(const Eigen::MatrixXd& X, const Labels& y, const Eigen::VectorXd& sample_weight,
                               const TreeParams& params, Rng& rng) {
  check_same_rows(X, y);
  if (sample_weight.size() != X.rows()) throw InvalidArgument("sample weights and rows differ in length");
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    if (sample_weight[i] < 0) throw InvalidArgument("sample weights must be nonnegative");
    if (sample_weight[i] > 0) idx.push_back(i);
  }
  if (idx.empty()) throw InvalidArgument("all sample weights are zero");
  DecisionTree tree;
  TreeBuilder(X, y, sample_weight, params, rng, tree.nodes_).build(idx, 0);
  return tree;
}

double DecisionTree::predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  int id = 0;
  while (nodes_[id].feature >= 0) {
    id = x[nodes_[id].feature] <= nodes_[id].threshold ? nodes_[id].left : nodes_[id].right;
  }
  return nodes_[id].value;
}

Eigen::VectorXd DecisionTree::predict_proba(const Eigen::MatrixXd& X) const {
  Eigen::VectorXd out(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) out[i] = predict_row(X.row(i));
  return out;
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> level(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (nodes_[i].feature >= 0) {
      level[static_cast<std::size_t>(nodes_[i].left)] = level[i] + 1;
      level[static_cast<std::size_t>(nodes_[i].right)] = level[i] + 1;
    }
  }
  return deepest;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.feature < 0; }));
}

nlohmann::json DecisionTree::to_json() const {
  std::vector<int> feature, left, right;
  std::vector<double> threshold, value;
  for (const auto& n : nodes_) {
    feature.push_back(n.feature);
    left.push_back(n.left);
    right.push_back(n.right);
    threshold.push_back(n.threshold);
    value.push_back(n.value);
  }
  return {{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right}, {"value", value}};
}

DecisionTree DecisionTree::from_json(const nlohmann::json& j) {
  const auto feature = j.at("feature").get<std::vector<int>>();
  const auto threshold = j.at("threshold").get<std::vector<double>>();
  const auto left = j.at("left").get<std::vector<int>>();
  const auto right = j.at("right").get<std::vector<int>>();
  const auto value = j.at("value").get<std::vector<double>>();
  const std::size_t n = feature.size();
  if (n == 0 || threshold.size() != n || left.size() != n || right.size() != n || value.size() != n) {
    throw ParseError("tree: inconsistent node arrays");
  }
  DecisionTree tree;
  for (std::size_t i = 0; i < n; ++i) {
    if (feature[i] >= 0 && (left[i] <= static_cast<int>(i) || right[i] <= static_cast<int>(i) ||
                            left[i] >= static_cast<int>(n) || right[i] >= static_cast<int>(n))) {
      throw ParseError("tree: child index out of range");
    }
    tree.nodes_.push_back({feature[i], threshold[i], left[i], right[i], value[i]});
  }
  return tree;
}

Eigen::VectorXd bootstrap_weights(std::size_t n, Rng& rng) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) w[static_cast<Eigen::Index>(rng.uniform_index(n))] += 1.0;
  return w;
}

// ---------------------------------------------------------------------------

RandomForestModel RandomForestModel::fit(const Eigen::MatrixXd& X, const Labels& y, const ForestParams& params,
                                         std::uint64_t seed, Execution exec) {
  check_training_data(X, y);
  if (params.n_estimators == 0) throw InvalidArgument("random forest: n_estimators must be positive");
  const auto n = static_cast<std::size_t>(X.rows());
  TreeParams tree_params;
  tree_params.max_depth = params.max_depth;
  tree_params.min_samples_leaf = params.min_samples_leaf;
  tree_params.max_features =
      params.max_features > 0
          ? params.max_features
          : std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(X.cols())))));

  RandomForestModel model;
  model.dimension_ = static_cast<std::size_t>(X.cols());
  model.trees_.resize(params.n_estimators);
  for_each_index(params.n_estimators, exec, [&](std::size_t t) {
    Rng rng(mix_seed(seed, t));
    const Eigen::VectorXd w = params.bootstrap ? bootstrap_weights(n, rng)
                                               : Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
    model.trees_[t] = DecisionTree::fit(X, y, w, tree_params, rng);
  });
  return model;
}

Eigen::VectorXd RandomForestModel::predict_proba(const Eigen::MatrixXd& X) const {
  check_prediction_input(X, dimension_);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(X.rows());
  for (const auto& tree : trees_) sum += tree.predict_proba(X);
  return sum / static_cast<double>(trees_.size());
}

nlohmann::json RandomForestModel::to_json() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : trees_) trees.push_back(t.to_json());
  return {{"dimension", dimension_}, {"trees", trees}};
}

RandomForestModel RandomForestModel::from_json(const nlohmann::json& j) {
  RandomForestModel m;
  m.dimension_ = j.at("dimension").get<std::size_t>();
  for (const auto& t : j.at("trees")) m.trees_.push_back(DecisionTree::from_json(t));
  if (m.trees_.empty()) throw ParseError("random forest: no trees");
  return m;
}

// ---------------------------------------------------------------------------

AdaBoostModel AdaBoostModel::fit(const Eigen::MatrixXd& X, const Labels& y, const AdaBoostParams& params) {
  check_training_data(X, y);
  if (params.n_estimators == 0) throw InvalidArgument("adaboost: n_estimators must be positive");
  if (!(params.learning_rate > 0)) throw InvalidArgument("adaboost: learning_rate must be positive");
  const Eigen::Index n = X.rows();
  AdaBoostModel model;
  model.dimension_ = static_cast<std::size_t>(X.cols());
  TreeParams tree_params;
  tree_params.max_depth = params.max_depth;
  Rng unused(0);  // all features are searched, so the tree never draws

  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (std::size_t m = 0; m < params.n_estimators; ++m) {
    DecisionTree stump = DecisionTree::fit(X, y, w, tree_params, unused);
    Eigen::VectorXd incorrect(n);
    double error = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int predicted = stump.predict_row(X.row(i)) > 0.5 ? 1 : 0;
      incorrect[i] = predicted != y[i] ? 1.0 : 0.0;
      error += w[i] * incorrect[i];
    }
    error /= w.sum();

    if (error <= 0.0) {
      model.trees_.push_back(std::move(stump));
      model.alphas_.push_back(1.0);
      break;
    }
    if (error >= 0.5) {
      // No better than chance: keep a lone first stump so the model still
      // predicts (the majority side), otherwise stop boosting.
      if (model.trees_.empty()) {
        model.trees_.push_back(std::move(stump));
        model.alphas_.push_back(1.0);
      }
      break;
    }
    const double alpha = params.learning_rate * std::log((1.0 - error) / error);
    model.trees_.push_back(std::move(stump));
    model.alphas_.push_back(alpha);
    if (m + 1 == params.n_estimators) break;

    for (Eigen::Index i = 0; i < n; ++i) {
      if (w[i] > 0) w[i] *= std::exp(alpha * incorrect[i]);
    }
    const double total = w.sum();
    if (!(total > 0) || !std::isfinite(total)) break;
    w /= total;
    model.weight_sums_.push_back(w.sum());
  }
  return model;
}

Eigen::VectorXd AdaBoostModel::decision_function(const Eigen::MatrixXd& X) const {
  check_prediction_input(X, dimension_);
  Eigen::VectorXd vote = Eigen::VectorXd::Zero(X.rows());
  double total = 0.0;
  for (std::size_t m = 0; m < trees_.size(); ++m) {
    total += alphas_[m];
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      vote[i] += alphas_[m] * (trees_[m].predict_row(X.row(i)) > 0.5 ? 1.0 : -1.0);
    }
  }
  return vote / total;
}

Eigen::VectorXd AdaBoostModel::predict_proba(const Eigen::MatrixXd& X) const {
  Eigen::VectorXd d = decision_function(X);
  for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = sigmoid(d[i]);
  return d;
}

nlohmann::json AdaBoostModel::to_json() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : trees_) trees.push_back(t.to_json());
  return {{"dimension", dimension_}, {"alphas", alphas_}, {"trees", trees}};
}

AdaBoostModel AdaBoostModel::from_json(const nlohmann::json& j) {
  AdaBoostModel m;
  m.dimension_ = j.at("dimension").get<std::size_t>();
  m.alphas_ = j.at("alphas").get<std::vector<double>>();
  for (const auto& t : j.at("trees")) m.trees_.push_back(DecisionTree::from_json(t));
  if (m.trees_.empty() || m.trees_.size() != m.alphas_.size()) throw ParseError("adaboost: inconsistent ensemble");
  return m;
}

}  // namespace stylebreach
