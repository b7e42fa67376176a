#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "impair/discriminant.hpp"
#include "impair/ensemble.hpp"
#include "impair/knn.hpp"
#include "impair/logistic.hpp"
#include "impair/svm.hpp"
#include "impair/tree.hpp"

namespace impair {

using TrainedModel = std::variant<TreeModel, DiscriminantModel, LogisticModel, SvmModel, KnnModel, EnsembleModel>;

Prediction predict(const TrainedModel& m, std::span<const double> x);

struct TreeConfig {
  std::size_t max_splits = 100;
};
struct DiscriminantConfig {
  DiscriminantKind kind = DiscriminantKind::Linear;
};
struct LogisticConfig {
  LogisticOptions options;
};
struct SvmConfig {
  Kernel kernel;
  SvmOptions options;
};
struct KnnConfig {
  KnnOptions options;
};
struct AdaBoostConfig {
  BoostOptions options;
};
struct RusBoostConfig {
  BoostOptions options;
};
struct BagConfig {
  BagOptions options;
};
struct SubspaceConfig {
  SubspaceBase base = SubspaceBase::Discriminant;
  std::size_t n_learners = 30;
  std::size_t subspace_dim = 0;  // 0: default_subspace_dim(dim)
  KnnOptions knn;
};

using PresetConfig = std::variant<TreeConfig, DiscriminantConfig, LogisticConfig, SvmConfig, KnnConfig, AdaBoostConfig,
                                  RusBoostConfig, BagConfig, SubspaceConfig>;

struct Preset {
  std::string name;
  PresetConfig config;
};

// The 23 classifier rows of the reference leaderboard, in its order, with
// the reference spelling ("Baged Trees").
const std::vector<Preset>& leaderboard_presets();

// Exact name lookup; "Bagged Trees" is accepted for "Baged Trees". Throws
// Error on unknown names.
const Preset& find_preset(std::string_view name);

// seed feeds the randomized families (bagging, RUSBoost, subspace); the rest
// ignore it.
TrainedModel fit_preset(const Preset& p, const TrainingSet& ts, std::uint64_t seed);

}  // namespace impair
