#include "impair/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "impair/error.hpp"

namespace impair {

double gini_impurity(double w0, double w1) {
  const double w = w0 + w1;
  if (w <= 0.0) return 0.0;
  const double p0 = w0 / w;
  const double p1 = w1 / w;
  return 1.0 - p0 * p0 - p1 * p1;
}

std::size_t TreeModel::internal_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return !n.is_leaf(); }));
}

std::size_t TreeModel::leaf_index(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return i;
}

namespace {

constexpr double kTieTolerance = 1e-12;

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

struct Pending {
  int node = -1;
  std::vector<std::size_t> rows;
  Split split;
};

struct ClassWeights {
  double w0 = 0.0;
  double w1 = 0.0;
  double total() const { return w0 + w1; }
  void add(Label l, double w) { (l == Label::Induced ? w1 : w0) += w; }
};

ClassWeights tally(const TrainingSet& ts, const std::vector<double>& w, const std::vector<std::size_t>& rows) {
  ClassWeights c;
  for (std::size_t i : rows) c.add(ts.y[i], w[i]);
  return c;
}

Split find_split(const TrainingSet& ts, const std::vector<double>& w, const std::vector<std::size_t>& rows) {
  Split best;
  const ClassWeights parent = tally(ts, w, rows);
  const double parent_cost = parent.total() * gini_impurity(parent.w0, parent.w1);
  if (parent_cost <= 0.0) return best;

  std::vector<std::size_t> order(rows);
  for (std::size_t f = 0; f < ts.cols; ++f) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ts.at(a, f) < ts.at(b, f); });
    ClassWeights left;
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
      left.add(ts.y[order[k]], w[order[k]]);
      const double here = ts.at(order[k], f);
      const double next = ts.at(order[k + 1], f);
      if (!(here < next)) continue;
      const ClassWeights right{parent.w0 - left.w0, parent.w1 - left.w1};
      const double child_cost =
          left.total() * gini_impurity(left.w0, left.w1) + right.total() * gini_impurity(right.w0, right.w1);
      const double gain = parent_cost - child_cost;
      if (gain > best.gain + kTieTolerance) {
        best.feature = static_cast<int>(f);
        best.threshold = 0.5 * (here + next);
        best.gain = gain;
      }
    }
  }
  return best;
}

TreeNode make_leaf(const ClassWeights& c, double fallback_prob) {
  TreeNode n;
  n.weight = c.total();
  n.prob1 = c.total() > 0.0 ? c.w1 / c.total() : fallback_prob;
  return n;
}

}  // namespace

TreeModel fit_tree(const TrainingSet& ts, std::size_t max_splits, std::optional<std::span<const double>> sample_weights) {
  if (ts.rows == 0) throw Error("fit_tree: empty training set");
  std::vector<double> w(ts.rows, 1.0);
  if (sample_weights) {
    const auto& sw = *sample_weights;
    if (sw.size() != ts.rows) throw Error("fit_tree: need one weight per sample");
    double sum = 0.0;
    for (double v : sw) {
      if (!std::isfinite(v) || v < 0.0) throw Error("fit_tree: weights must be finite and non-negative");
      sum += v;
    }
    if (!(sum > 0.0)) throw Error("fit_tree: weights must not all be zero");
    w.assign(sw.begin(), sw.end());
  }

  TreeModel m;
  m.dim = ts.cols;
  m.max_splits = max_splits;

  std::vector<std::size_t> all(ts.rows);
  std::iota(all.begin(), all.end(), std::size_t{0});
  m.nodes.push_back(make_leaf(tally(ts, w, all), 0.5));

  std::vector<Pending> frontier;
  frontier.push_back({0, std::move(all), {}});
  frontier.back().split = find_split(ts, w, frontier.back().rows);

  std::size_t splits = 0;
  while (splits < max_splits) {
    auto best = frontier.end();
    for (auto it = frontier.begin(); it != frontier.end(); ++it) {
      if (it->split.feature < 0) continue;
      if (best == frontier.end() || it->split.gain > best->split.gain + kTieTolerance ||
          (std::abs(it->split.gain - best->split.gain) <= kTieTolerance && it->node < best->node))
        best = it;
    }
    if (best == frontier.end()) break;

    Pending p = std::move(*best);
    frontier.erase(best);
    const auto f = static_cast<std::size_t>(p.split.feature);
    std::vector<std::size_t> lrows;
    std::vector<std::size_t> rrows;
    for (std::size_t i : p.rows) (ts.at(i, f) <= p.split.threshold ? lrows : rrows).push_back(i);

    const double parent_prob = m.nodes[static_cast<std::size_t>(p.node)].prob1;
    const int left = static_cast<int>(m.nodes.size());
    m.nodes.push_back(make_leaf(tally(ts, w, lrows), parent_prob));
    const int right = static_cast<int>(m.nodes.size());
    m.nodes.push_back(make_leaf(tally(ts, w, rrows), parent_prob));

    TreeNode& parent = m.nodes[static_cast<std::size_t>(p.node)];
    parent.feature = p.split.feature;
    parent.threshold = p.split.threshold;
    parent.left = left;
    parent.right = right;
    ++splits;

    Pending lp{left, std::move(lrows), {}};
    lp.split = find_split(ts, w, lp.rows);
    Pending rp{right, std::move(rrows), {}};
    rp.split = find_split(ts, w, rp.rows);
    frontier.push_back(std::move(lp));
    frontier.push_back(std::move(rp));
  }
  return m;
}

Prediction predict_tree(const TreeModel& m, std::span<const double> x) {
  require_dim(x, m.dim, "predict_tree");
  const double p = m.nodes[m.leaf_index(x)].prob1;
  return {label_from_probability(p), p};
}

}  // namespace impair
