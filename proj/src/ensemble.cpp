#include "impair/ensemble.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <string>

#include "impair/error.hpp"
#include "impair/rng.hpp"

namespace impair {

Prediction predict_base(const BaseModel& m, std::span<const double> x) {
  return std::visit(
      [&](const auto& model) -> Prediction {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, TreeModel>) return predict_tree(model, x);
        else if constexpr (std::is_same_v<T, DiscriminantModel>) return predict_discriminant(model, x);
        else return knn_predict(model, x);
      },
      m);
}

namespace {

std::vector<std::size_t> all_features(std::size_t dim) {
  std::vector<std::size_t> f(dim);
  std::iota(f.begin(), f.end(), std::size_t{0});
  return f;
}

std::vector<double> project(std::span<const double> x, const std::vector<std::size_t>& features) {
  std::vector<double> out;
  out.reserve(features.size());
  for (std::size_t f : features) out.push_back(x[f]);
  return out;
}

// Rows for one boosting round's tree fit; empty means all rows.
using RoundSampler = std::vector<std::size_t> (*)(const TrainingSet&, std::span<const double>, std::uint64_t,
                                                  std::size_t);

EnsembleModel boost(const TrainingSet& ts, const BoostOptions& opt, EnsembleMethod method, std::uint64_t seed,
                    RoundSampler sampler) {
  require_both_classes(ts, method == EnsembleMethod::AdaBoost ? "fit_adaboost" : "fit_rusboost");
  if (!(opt.learning_rate >= 0.0) || !std::isfinite(opt.learning_rate))
    throw Error("boosting: learning rate must be finite and non-negative");

  EnsembleModel m;
  m.method = method;
  m.dim = ts.cols;
  m.n_learners = opt.n_learners;
  m.learning_rate = opt.learning_rate;

  const std::size_t n = ts.rows;
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  std::vector<Label> pred(n);
  const double alpha_cap = opt.learning_rate * 0.5 * std::log(kMaxBoostOdds);

  for (std::size_t t = 0; t < opt.n_learners; ++t) {
    TreeModel tree;
    const std::vector<std::size_t> rows = sampler ? sampler(ts, w, seed, t) : std::vector<std::size_t>{};
    if (rows.empty()) {
      tree = fit_tree(ts, opt.max_splits, std::span<const double>(w));
    } else {
      std::vector<double> sub_w;
      sub_w.reserve(rows.size());
      for (std::size_t i : rows) sub_w.push_back(w[i]);
      tree = fit_tree(ts.subset_rows(rows), opt.max_splits, std::span<const double>(sub_w));
    }

    double eps = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] = predict_tree(tree, ts.row(i)).label;
      if (pred[i] != ts.y[i]) eps += w[i];
    }
    if (eps >= 0.5) break;

    const bool perfect = eps <= 0.0;
    const double alpha = perfect ? alpha_cap : std::min(alpha_cap, opt.learning_rate * 0.5 * std::log((1.0 - eps) / eps));
    m.members.push_back({std::move(tree), alpha, all_features(ts.cols), eps});
    if (perfect) break;

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] *= std::exp(pred[i] != ts.y[i] ? alpha : -alpha);
      total += w[i];
    }
    for (double& v : w) v /= total;
  }
  return m;
}

}  // namespace

std::vector<std::size_t> rusboost_round_rows(const TrainingSet& ts, std::span<const double> w, std::uint64_t seed,
                                             std::size_t round) {
  if (w.size() != ts.rows) throw Error("rusboost_round_rows: need one weight per row");
  const std::size_t n0 = ts.count(Label::Normal);
  const std::size_t n1 = ts.count(Label::Induced);
  if (n0 == n1) return {};
  const Label minority = n0 < n1 ? Label::Normal : Label::Induced;
  const std::size_t keep = std::min(n0, n1);

  Rng rng(derive_seed(seed, "rusboost:round:" + std::to_string(round)));
  std::vector<std::pair<double, std::size_t>> keyed;
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < ts.rows; ++i) {
    if (ts.y[i] == minority) {
      rows.push_back(i);
      continue;
    }
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    keyed.emplace_back(w[i] > 0.0 ? std::log(u) / w[i] : -std::numeric_limits<double>::infinity(), i);
  }
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(keep), keyed.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
  for (std::size_t k = 0; k < keep; ++k) rows.push_back(keyed[k].second);
  std::sort(rows.begin(), rows.end());
  return rows;
}

EnsembleModel fit_adaboost(const TrainingSet& ts, const BoostOptions& opt) {
  return boost(ts, opt, EnsembleMethod::AdaBoost, 0, nullptr);
}

EnsembleModel fit_rusboost(const TrainingSet& ts, std::uint64_t seed, const BoostOptions& opt) {
  return boost(ts, opt, EnsembleMethod::RusBoost, seed, &rusboost_round_rows);
}

std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = static_cast<std::size_t>(rng.below(n));
  return idx;
}

EnsembleModel fit_bagging(const TrainingSet& ts, std::uint64_t seed, const BagOptions& opt) {
  if (ts.rows == 0) throw Error("fit_bagging: empty training set");
  EnsembleModel m;
  m.method = EnsembleMethod::Bag;
  m.dim = ts.cols;
  m.n_learners = opt.n_learners;
  for (std::size_t i = 0; i < opt.n_learners; ++i) {
    const auto rows = bootstrap_indices(ts.rows, derive_seed(seed, "bag:member:" + std::to_string(i)));
    m.members.push_back({fit_tree(ts.subset_rows(rows), ts.rows - 1), 1.0, all_features(ts.cols), 0.0});
  }
  return m;
}

std::size_t default_subspace_dim(std::size_t dim) { return std::max<std::size_t>(1, dim / 2); }

std::vector<std::size_t> draw_feature_subset(std::uint64_t member_seed, std::size_t dim, std::size_t subspace_dim) {
  Rng rng(member_seed);
  std::vector<std::size_t> perm = all_features(dim);
  for (std::size_t j = 0; j < subspace_dim; ++j) std::swap(perm[j], perm[j + rng.below(dim - j)]);
  perm.resize(subspace_dim);
  std::sort(perm.begin(), perm.end());
  return perm;
}

EnsembleModel fit_subspace(const TrainingSet& ts, std::uint64_t seed, const SubspaceOptions& opt) {
  if (opt.subspace_dim < 1 || opt.subspace_dim > ts.cols)
    throw Error("fit_subspace: subspace_dim must lie in [1, " + std::to_string(ts.cols) + "]");
  EnsembleModel m;
  m.method = EnsembleMethod::Subspace;
  m.dim = ts.cols;
  m.n_learners = opt.n_learners;
  for (std::size_t i = 0; i < opt.n_learners; ++i) {
    auto features =
        draw_feature_subset(derive_seed(seed, "subspace:member:" + std::to_string(i)), ts.cols, opt.subspace_dim);
    const TrainingSet sub = ts.subset_cols(features);
    BaseModel model = opt.base == SubspaceBase::Discriminant ? BaseModel{fit_discriminant(sub, DiscriminantKind::Linear)}
                                                             : BaseModel{fit_knn(sub, opt.knn)};
    m.members.push_back({std::move(model), 1.0, std::move(features), 0.0});
  }
  return m;
}

Prediction predict_ensemble(const EnsembleModel& m, std::span<const double> x) {
  require_dim(x, m.dim, "predict_ensemble");
  switch (m.method) {
    case EnsembleMethod::AdaBoost:
    case EnsembleMethod::RusBoost: {
      double f = 0.0;
      for (const auto& mem : m.members) {
        const Label h = predict_base(mem.model, project(x, mem.features)).label;
        f += mem.weight * (h == Label::Induced ? 1.0 : -1.0);
      }
      return {label_from_margin(f), f};
    }
    case EnsembleMethod::Bag:
    case EnsembleMethod::Subspace: {
      if (m.members.empty()) throw Error("predict_ensemble: ensemble has no members");
      double sum = 0.0;
      for (const auto& mem : m.members) {
        const Prediction p = predict_base(mem.model, project(x, mem.features));
        sum += m.method == EnsembleMethod::Bag ? (p.label == Label::Induced ? 1.0 : 0.0) : p.score;
      }
      const double s = sum / static_cast<double>(m.members.size());
      return {label_from_probability(s), s};
    }
  }
  return {};
}

}  // namespace impair
