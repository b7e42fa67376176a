#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "impair/discriminant.hpp"
#include "impair/knn.hpp"
#include "impair/training_set.hpp"
#include "impair/tree.hpp"

namespace impair {

using BaseModel = std::variant<TreeModel, DiscriminantModel, KnnModel>;

struct EnsembleMember {
  BaseModel model;
  double weight = 1.0;
  std::vector<std::size_t> features;  // columns this member was trained on
  double weighted_error = 0.0;        // boosting only: round error
};

enum class EnsembleMethod { AdaBoost, Bag, RusBoost, Subspace };

struct EnsembleModel {
  EnsembleMethod method = EnsembleMethod::AdaBoost;
  std::size_t dim = 0;
  std::vector<EnsembleMember> members;
  std::size_t n_learners = 0;
  double learning_rate = 1.0;
};

struct BoostOptions {
  std::size_t n_learners = 30;
  double learning_rate = 0.1;
  std::size_t max_splits = 20;
};

// Largest odds ratio a boosting round may claim; a perfect round gets
// learning_rate * 0.5 * ln(kMaxBoostOdds) and ends boosting.
inline constexpr double kMaxBoostOdds = 1e10;

// AdaBoost.M1 over weighted trees. Per round: eps = weighted training error;
// eps >= 0.5 ends boosting without keeping the round; otherwise
// alpha = learning_rate * 0.5 * ln((1 - eps) / eps), misclassified weights are
// multiplied by exp(alpha), the rest by exp(-alpha), then renormalized.
EnsembleModel fit_adaboost(const TrainingSet& ts, const BoostOptions& opt = {});

// AdaBoost.M1 where each round's tree sees all minority rows plus an equal
// number of majority rows drawn without replacement with probability
// proportional to their current weights (Efraimidis-Spirakis keys
// log(u)/w, stream derive_seed(seed, "rusboost:round:<t>")). Error and weight
// updates use the full set.
EnsembleModel fit_rusboost(const TrainingSet& ts, std::uint64_t seed, const BoostOptions& opt = {});

// Rows the tree of boosting round `round` trains on: every minority row plus
// as many majority rows, drawn as described above, in ascending order. Empty
// (meaning all rows) when the classes are already balanced.
std::vector<std::size_t> rusboost_round_rows(const TrainingSet& ts, std::span<const double> weights,
                                             std::uint64_t seed, std::size_t round);

// n draws with replacement from Rng(seed) via Rng::below(n).
std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed);

struct BagOptions {
  std::size_t n_learners = 30;
};

// Member i trains a tree with max_splits = n - 1 on
// bootstrap_indices(n, derive_seed(seed, "bag:member:<i>")).
EnsembleModel fit_bagging(const TrainingSet& ts, std::uint64_t seed, const BagOptions& opt = {});

enum class SubspaceBase { Discriminant, Knn };

struct SubspaceOptions {
  SubspaceBase base = SubspaceBase::Discriminant;
  std::size_t n_learners = 30;
  std::size_t subspace_dim = 1;
  KnnOptions knn{};  // used when base == Knn
};

// max(1, dim / 2)
std::size_t default_subspace_dim(std::size_t dim);

// Member i uses Rng(derive_seed(seed, "subspace:member:<i>")): a partial
// Fisher-Yates shuffle of [0, dim) where step j swaps position j with
// j + below(dim - j); the first subspace_dim entries, sorted ascending, form
// the subset.
std::vector<std::size_t> draw_feature_subset(std::uint64_t member_seed, std::size_t dim, std::size_t subspace_dim);

EnsembleModel fit_subspace(const TrainingSet& ts, std::uint64_t seed, const SubspaceOptions& opt = {});

// Boosting: score = sum alpha_t h_t(x), h in {-1, +1}, margin rule.
// Bagging: score = share of members voting class 1.
// Subspace: score = mean member score.
Prediction predict_ensemble(const EnsembleModel& m, std::span<const double> x);

Prediction predict_base(const BaseModel& m, std::span<const double> x);

}  // namespace impair
