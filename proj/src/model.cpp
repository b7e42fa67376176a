#include "impair/model.hpp"

#include <cmath>

#include "impair/error.hpp"

namespace impair {

Prediction predict(const TrainedModel& m, std::span<const double> x) {
  return std::visit(
      [&](const auto& model) -> Prediction {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, TreeModel>) return predict_tree(model, x);
        else if constexpr (std::is_same_v<T, DiscriminantModel>) return predict_discriminant(model, x);
        else if constexpr (std::is_same_v<T, LogisticModel>) return predict_logistic(model, x);
        else if constexpr (std::is_same_v<T, SvmModel>) return predict_svm(model, x);
        else if constexpr (std::is_same_v<T, KnnModel>) return knn_predict(model, x);
        else return predict_ensemble(model, x);
      },
      m);
}

namespace {

// Gaussian kernel scales are quoted for P = 2 predictors.
const double kSqrtP = std::sqrt(2.0);

KnnConfig knn(std::size_t k, KnnMetric metric, KnnWeighting weighting = KnnWeighting::Uniform) {
  KnnConfig c;
  c.options.k = k;
  c.options.metric = metric;
  c.options.weighting = weighting;
  return c;
}

SvmConfig svm(Kernel kernel) {
  SvmConfig c;
  c.kernel = kernel;
  c.options.box_constraint = 1.0;
  return c;
}

std::vector<Preset> build_presets() {
  SubspaceConfig subspace_knn;
  subspace_knn.base = SubspaceBase::Knn;
  subspace_knn.knn.k = 1;
  return {
      {"Fine Tree", TreeConfig{100}},
      {"Medium Tree", TreeConfig{20}},
      {"Coarse Tree", TreeConfig{4}},
      {"Linear Discriminant", DiscriminantConfig{DiscriminantKind::Linear}},
      {"Quadratic Discriminant", DiscriminantConfig{DiscriminantKind::Quadratic}},
      {"Logistic Regression", LogisticConfig{}},
      {"Linear SVM", svm(Kernel::linear())},
      {"Quadratic SVM", svm(Kernel::polynomial(2))},
      {"Cubic SVM", svm(Kernel::polynomial(3))},
      {"Fine Gaussian SVM", svm(Kernel::gaussian(kSqrtP / 4.0))},
      {"Medium Gaussian SVM", svm(Kernel::gaussian(kSqrtP))},
      {"Coarse Gaussian SVM", svm(Kernel::gaussian(4.0 * kSqrtP))},
      {"Fine KNN", knn(1, KnnMetric::Euclidean)},
      {"Medium KNN", knn(10, KnnMetric::Euclidean)},
      {"Coarse KNN", knn(100, KnnMetric::Euclidean)},
      {"Cosine KNN", knn(10, KnnMetric::Cosine)},
      {"Cubic KNN", knn(10, KnnMetric::Minkowski3)},
      {"Weighted KNN", knn(10, KnnMetric::Euclidean, KnnWeighting::SquaredInverse)},
      {"Boosted Trees", AdaBoostConfig{}},
      {"Baged Trees", BagConfig{}},
      {"Subspace Discriminant", SubspaceConfig{}},
      {"Subspace KNN", subspace_knn},
      {"RUSBoosted Trees", RusBoostConfig{}},
  };
}

}  // namespace

const std::vector<Preset>& leaderboard_presets() {
  static const std::vector<Preset> presets = build_presets();
  return presets;
}

const Preset& find_preset(std::string_view name) {
  if (name == "Bagged Trees") name = "Baged Trees";
  for (const Preset& p : leaderboard_presets())
    if (p.name == name) return p;
  throw Error("unknown classifier preset '" + std::string(name) + "'");
}

TrainedModel fit_preset(const Preset& p, const TrainingSet& ts, std::uint64_t seed) {
  return std::visit(
      [&](const auto& cfg) -> TrainedModel {
        using T = std::decay_t<decltype(cfg)>;
        if constexpr (std::is_same_v<T, TreeConfig>) {
          return fit_tree(ts, cfg.max_splits);
        } else if constexpr (std::is_same_v<T, DiscriminantConfig>) {
          return fit_discriminant(ts, cfg.kind);
        } else if constexpr (std::is_same_v<T, LogisticConfig>) {
          return fit_logistic(ts, cfg.options);
        } else if constexpr (std::is_same_v<T, SvmConfig>) {
          return fit_svm(ts, cfg.kernel, cfg.options);
        } else if constexpr (std::is_same_v<T, KnnConfig>) {
          return fit_knn(ts, cfg.options);
        } else if constexpr (std::is_same_v<T, AdaBoostConfig>) {
          return fit_adaboost(ts, cfg.options);
        } else if constexpr (std::is_same_v<T, RusBoostConfig>) {
          return fit_rusboost(ts, seed, cfg.options);
        } else if constexpr (std::is_same_v<T, BagConfig>) {
          return fit_bagging(ts, seed, cfg.options);
        } else {
          SubspaceOptions opt;
          opt.base = cfg.base;
          opt.n_learners = cfg.n_learners;
          opt.subspace_dim = cfg.subspace_dim == 0 ? default_subspace_dim(ts.cols) : cfg.subspace_dim;
          opt.knn = cfg.knn;
          return fit_subspace(ts, seed, opt);
        }
      },
      p.config);
}

}  // namespace impair
