#include "stylebreach/learners/gbm.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "stylebreach/error.hpp"
#include "stylebreach/random.hpp"

namespace stylebreach {
namespace {

struct Split {
  int feature = -1;
  std::size_t bin = 0;
  double gain = 0.0;
};

struct Leaf {
  std::vector<std::size_t> rows;
  double G = 0.0;
  double H = 0.0;
  int node = 0;
  Split best;
};

double threshold_l1(double g, double l1) {
  const double reduced = std::max(std::abs(g) - l1, 0.0);
  return g >= 0 ? reduced : -reduced;
}

double leaf_score(double G, double H, const GbmParams& p) {
  const double t = threshold_l1(G, p.lambda_l1);
  return t * t / (H + p.lambda_l2);
}

double leaf_output(double G, double H, const GbmParams& p) {
  return -threshold_l1(G, p.lambda_l1) / (H + p.lambda_l2);
}

Split best_split(const BinnedMatrix& bm, const Leaf& leaf, const Eigen::VectorXd& g, const Eigen::VectorXd& h,
                 const std::vector<std::size_t>& features, const GbmParams& p, Execution exec) {
  std::vector<Split> per_feature(features.size());
  const double parent = leaf_score(leaf.G, leaf.H, p);
  for_each_index(features.size(), exec, [&](std::size_t k) {
    const std::size_t f = features[k];
    const std::size_t nb = bm.bin_count(f);
    std::vector<double> hg(nb, 0.0), hh(nb, 0.0);
    std::vector<std::size_t> hc(nb, 0);
    for (const auto r : leaf.rows) {
      const auto b = bm.bin(r, f);
      hg[b] += g[static_cast<Eigen::Index>(r)];
      hh[b] += h[static_cast<Eigen::Index>(r)];
      ++hc[b];
    }
    Split best;
    best.feature = -1;
    double GL = 0.0, HL = 0.0;
    std::size_t CL = 0;
    for (std::size_t b = 0; b + 1 < nb; ++b) {
      GL += hg[b];
      HL += hh[b];
      CL += hc[b];
      const std::size_t CR = leaf.rows.size() - CL;
      if (CL < p.min_data_in_leaf || CR < p.min_data_in_leaf) continue;
      const double HR = leaf.H - HL;
      if (HL < p.min_sum_hessian || HR < p.min_sum_hessian) continue;
      const double gain = leaf_score(GL, HL, p) + leaf_score(leaf.G - GL, HR, p) - parent;
      if (gain > p.min_gain_to_split && gain > 0.0 && (best.feature < 0 || gain > best.gain)) {
        best = {static_cast<int>(f), b, gain};
      }
    }
    per_feature[k] = best;
  });
  Split best;
  for (const auto& s : per_feature) {
    if (s.feature >= 0 && (best.feature < 0 || s.gain > best.gain)) best = s;
  }
  return best;
}

double predict_tree(const std::vector<DecisionTree::Node>& nodes, const Eigen::Ref<const Eigen::RowVectorXd>& x) {
  int id = 0;
  while (nodes[id].feature >= 0) {
    id = x[nodes[id].feature] <= nodes[id].threshold ? nodes[id].left : nodes[id].right;
  }
  return nodes[id].value;
}

}  // namespace

BinnedMatrix BinnedMatrix::build(const Eigen::MatrixXd& X, std::size_t max_bin) {
  if (max_bin < 2 || max_bin > 65535) throw InvalidArgument("gbm: max_bin must be in [2, 65535]");
  BinnedMatrix bm;
  bm.rows = static_cast<std::size_t>(X.rows());
  bm.cols = static_cast<std::size_t>(X.cols());
  bm.upper_bounds.resize(bm.cols);
  bm.bins.resize(bm.rows * bm.cols);
  for (std::size_t f = 0; f < bm.cols; ++f) {
    std::map<double, std::size_t> counts;
    for (std::size_t r = 0; r < bm.rows; ++r) ++counts[X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(f))];
    std::vector<std::pair<double, std::size_t>> distinct(counts.begin(), counts.end());
    auto& bounds = bm.upper_bounds[f];
    const auto cut = [&](std::size_t k) {
      const double lo = distinct[k].first;
      const double hi = distinct[k + 1].first;
      double mid = lo + (hi - lo) / 2.0;
      if (!(mid < hi)) mid = lo;
      bounds.push_back(mid);
    };
    if (distinct.size() <= max_bin) {
      for (std::size_t k = 0; k + 1 < distinct.size(); ++k) cut(k);
    } else {
      const double per_bin = static_cast<double>(bm.rows) / static_cast<double>(max_bin);
      double filled = 0.0;
      for (std::size_t k = 0; k + 1 < distinct.size() && bounds.size() + 1 < max_bin; ++k) {
        filled += static_cast<double>(distinct[k].second);
        if (filled >= per_bin) {
          cut(k);
          filled = 0.0;
        }
      }
    }
    for (std::size_t r = 0; r < bm.rows; ++r) {
      const double x = X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(f));
      const auto it = std::lower_bound(bounds.begin(), bounds.end(), x);
      bm.bins[f * bm.rows + r] = static_cast<std::uint16_t>(it - bounds.begin());
    }
  }
  return bm;
}

GbmModel GbmModel::fit(const Eigen::MatrixXd& X, const Labels& y, const GbmParams& params, std::uint64_t seed,
                       Execution exec) {
  check_training_data(X, y);
  if (params.num_leaves < 2) throw InvalidArgument("gbm: num_leaves must be at least 2");
  if (params.learning_rate < 0) throw InvalidArgument("gbm: learning_rate must be nonnegative");
  if (!(params.feature_fraction > 0 && params.feature_fraction <= 1)) {
    throw InvalidArgument("gbm: feature_fraction must be in (0, 1]");
  }
  if (params.lambda_l1 < 0 || params.lambda_l2 < 0) throw InvalidArgument("gbm: regularization must be nonnegative");

  GbmModel model;
  model.dimension_ = static_cast<std::size_t>(X.cols());
  const auto n = static_cast<std::size_t>(X.rows());
  model.prior_ = y.cast<double>().mean();
  model.init_score_ = std::log(model.prior_ / (1.0 - model.prior_));
  // With zero shrinkage every tree contributes nothing; keep the prior only.
  if (params.learning_rate == 0.0) return model;

  const BinnedMatrix bm = BinnedMatrix::build(X, params.max_bin);
  const std::size_t d = model.dimension_;
  const std::size_t per_tree = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(params.feature_fraction * static_cast<double>(d))));
  Rng rng(seed);

  Eigen::VectorXd score = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), model.init_score_);
  Eigen::VectorXd g(static_cast<Eigen::Index>(n)), h(static_cast<Eigen::Index>(n));
  for (std::size_t round = 0; round < params.n_estimators; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      const double p = sigmoid(score[r]);
      g[r] = p - y[r];
      h[r] = p * (1.0 - p);
    }
    std::vector<std::size_t> features = rng.sample_without_replacement(d, std::min(per_tree, d));
    std::sort(features.begin(), features.end());

    std::vector<DecisionTree::Node> nodes(1);
    std::vector<Leaf> leaves(1);
    leaves[0].rows.resize(n);
    for (std::size_t i = 0; i < n; ++i) leaves[0].rows[i] = i;
    leaves[0].G = g.sum();
    leaves[0].H = h.sum();
    leaves[0].best = best_split(bm, leaves[0], g, h, features, params, exec);

    while (leaves.size() < params.num_leaves) {
      std::size_t pick = leaves.size();
      for (std::size_t l = 0; l < leaves.size(); ++l) {
        if (leaves[l].best.feature < 0) continue;
        if (pick == leaves.size() || leaves[l].best.gain > leaves[pick].best.gain) pick = l;
      }
      if (pick == leaves.size()) break;

      const Split split = leaves[pick].best;
      const auto f = static_cast<std::size_t>(split.feature);
      Leaf left, right;
      for (const auto r : leaves[pick].rows) {
        Leaf& side = bm.bin(r, f) <= split.bin ? left : right;
        side.rows.push_back(r);
        side.G += g[static_cast<Eigen::Index>(r)];
        side.H += h[static_cast<Eigen::Index>(r)];
      }
      const int parent = leaves[pick].node;
      nodes[parent].feature = split.feature;
      nodes[parent].threshold = bm.upper_bounds[f][split.bin];
      left.node = static_cast<int>(nodes.size());
      right.node = left.node + 1;
      nodes[parent].left = left.node;
      nodes[parent].right = right.node;
      nodes.resize(nodes.size() + 2);
      left.best = best_split(bm, left, g, h, features, params, exec);
      right.best = best_split(bm, right, g, h, features, params, exec);
      leaves[pick] = std::move(left);
      leaves.push_back(std::move(right));
    }

    for (const auto& leaf : leaves) {
      const double value = params.learning_rate * leaf_output(leaf.G, leaf.H, params);
      nodes[leaf.node].value = value;
      for (const auto r : leaf.rows) score[static_cast<Eigen::Index>(r)] += value;
    }
    model.trees_.push_back(std::move(nodes));
  }
  return model;
}

Eigen::VectorXd GbmModel::raw_score(const Eigen::MatrixXd& X) const {
  check_prediction_input(X, dimension_);
  Eigen::VectorXd s = Eigen::VectorXd::Constant(X.rows(), init_score_);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (const auto& tree : trees_) s[i] += predict_tree(tree, X.row(i));
  }
  return s;
}

Eigen::VectorXd GbmModel::predict_proba(const Eigen::MatrixXd& X) const {
  if (trees_.empty()) {
    check_prediction_input(X, dimension_);
    return Eigen::VectorXd::Constant(X.rows(), prior_);
  }
  Eigen::VectorXd s = raw_score(X);
  for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = sigmoid(s[i]);
  return s;
}

nlohmann::json GbmModel::to_json() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& nodes : trees_) {
    std::vector<int> feature, left, right;
    std::vector<double> threshold, value;
    for (const auto& nd : nodes) {
      feature.push_back(nd.feature);
      left.push_back(nd.left);
      right.push_back(nd.right);
      threshold.push_back(nd.threshold);
      value.push_back(nd.value);
    }
    trees.push_back({{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right}, {"value", value}});
  }
  return {{"dimension", dimension_}, {"prior", prior_}, {"init_score", init_score_}, {"trees", trees}};
}

GbmModel GbmModel::from_json(const nlohmann::json& j) {
  GbmModel m;
  m.dimension_ = j.at("dimension").get<std::size_t>();
  m.prior_ = j.at("prior").get<double>();
  m.init_score_ = j.at("init_score").get<double>();
  for (const auto& t : j.at("trees")) m.trees_.push_back(DecisionTree::from_json(t).nodes());
  return m;
}

}  // namespace stylebreach
