#pragma once

#include <span>
#include <vector>

#include "impair/dataset.hpp"

namespace impair {

// Output of every predictor. score is a class-1 probability for
// probability-type models and a signed margin for margin-type models.
struct Prediction {
  Label label = Label::Normal;
  double score = 0.0;
};

// Applies the global tie rule: an exact tie goes to class 1.
inline Label label_from_probability(double p) { return p >= 0.5 ? Label::Induced : Label::Normal; }
inline Label label_from_margin(double m) { return m >= 0.0 ? Label::Induced : Label::Normal; }

// Row-major feature matrix with binary labels. Classifiers consume this
// rather than Dataset so that ensembles can hand them feature subsets.
struct TrainingSet {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> x;
  std::vector<Label> y;

  std::span<const double> row(std::size_t i) const { return {x.data() + i * cols, cols}; }
  double at(std::size_t i, std::size_t j) const { return x[i * cols + j]; }

  TrainingSet subset_rows(std::span<const std::size_t> idx) const;
  TrainingSet subset_cols(std::span<const std::size_t> features) const;
  std::size_t count(Label l) const;
};

TrainingSet to_training_set(const Dataset& ds);

// Throws on fewer than 2 rows or a missing class.
void require_both_classes(const TrainingSet& ts, const char* who);

void require_dim(std::span<const double> x, std::size_t dim, const char* who);

// z-score transform fitted on a training fold. Columns with zero spread are
// centered but not scaled.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const TrainingSet& ts);
  static Standardizer identity(std::size_t cols);

  std::vector<double> apply(std::span<const double> x) const;
  TrainingSet apply(const TrainingSet& ts) const;
};

}  // namespace impair
