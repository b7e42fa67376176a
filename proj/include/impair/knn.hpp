#pragma once

#include <span>
#include <vector>

#include "impair/training_set.hpp"

namespace impair {

enum class KnnMetric { Euclidean, Cosine, Minkowski3 };
enum class KnnWeighting { Uniform, SquaredInverse };

struct KnnOptions {
  std::size_t k = 1;
  KnnMetric metric = KnnMetric::Euclidean;
  KnnWeighting weighting = KnnWeighting::Uniform;
  bool standardize = true;
};

struct KnnModel {
  TrainingSet train;  // standardized when the options asked for it
  Standardizer standardizer;
  std::size_t k = 1;
  KnnMetric metric = KnnMetric::Euclidean;
  KnnWeighting weighting = KnnWeighting::Uniform;
};

// Cosine distance is 1 - cos(angle); a zero vector is at distance 1 from
// everything.
double knn_distance(KnnMetric metric, std::span<const double> a, std::span<const double> b);

// Stores the training set. A k above the training size is clamped with a
// warning on stderr.
KnnModel fit_knn(const TrainingSet& ts, const KnnOptions& opt);

// Indices into m.train of the k nearest rows, nearest first; equal distances
// keep training order.
std::vector<std::size_t> knn_neighbors(const KnnModel& m, std::span<const double> x);

// score = weighted class-1 share among the neighbors. Under SquaredInverse
// weighting, neighbors at distance 0 decide alone.
Prediction knn_predict(const KnnModel& m, std::span<const double> x);

}  // namespace impair
