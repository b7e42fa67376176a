#pragma once

#include <span>
#include <vector>

#include "impair/training_set.hpp"

namespace impair {

struct LogisticOptions {
  bool standardize = true;
  double ridge = 1e-8;
  std::size_t max_iterations = 200;
  double gradient_tolerance = 1e-8;
};

struct LogisticModel {
  std::size_t dim = 0;
  std::vector<double> weights;  // [intercept, w_1 .. w_dim], in standardized space
  Standardizer standardizer;
  std::size_t iterations = 0;
};

// Penalized log-likelihood sum_i [y_i log s_i + (1-y_i) log(1-s_i)] - ridge/2 |w|^2,
// s_i = sigmoid(b + w.x_i). The intercept is not penalized.
double logistic_objective(std::span<const double> weights, const TrainingSet& ts, double ridge);
std::vector<double> logistic_gradient(std::span<const double> weights, const TrainingSet& ts, double ridge);

// Newton-Raphson (IRLS) with step halving. Stops when the gradient's
// infinity norm drops below the tolerance or after max_iterations.
LogisticModel fit_logistic(const TrainingSet& ts, const LogisticOptions& opt = {});

Prediction predict_logistic(const LogisticModel& m, std::span<const double> x);

}  // namespace impair
