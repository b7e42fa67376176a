#pragma once

#include <optional>
#include <span>
#include <vector>

#include "impair/training_set.hpp"

namespace impair {

// Internal node when feature >= 0: rows with x[feature] <= threshold go left.
// Leaf otherwise.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double prob1 = 0.0;  // weighted class-1 fraction of training rows reaching the node
  double weight = 0.0;

  bool is_leaf() const { return feature < 0; }
};

struct TreeModel {
  std::size_t dim = 0;
  std::size_t max_splits = 0;
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  std::size_t internal_count() const;
  std::size_t leaf_index(std::span<const double> x) const;
};

// Gini impurity of a node holding class weights w0 and w1.
double gini_impurity(double w0, double w1);

// CART growth on weighted Gini. Leaves are expanded best-first (largest
// weighted impurity decrease, lowest node id on ties) until max_splits
// internal nodes exist or no split improves impurity. Candidate thresholds
// are midpoints between consecutive distinct feature values, scanned
// feature-major in ascending order; a later candidate replaces the incumbent
// only if it is better by more than 1e-12.
TreeModel fit_tree(const TrainingSet& ts, std::size_t max_splits,
                   std::optional<std::span<const double>> sample_weights = std::nullopt);

Prediction predict_tree(const TreeModel& m, std::span<const double> x);

}  // namespace impair
