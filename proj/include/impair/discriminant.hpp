#pragma once

#include <array>
#include <span>

#include <Eigen/Dense>

#include "impair/training_set.hpp"

namespace impair {

enum class DiscriminantKind { Linear, Quadratic };

struct DiscriminantModel {
  DiscriminantKind kind = DiscriminantKind::Linear;
  std::size_t dim = 0;
  std::array<Eigen::VectorXd, 2> means;
  // Linear: both entries hold the pooled covariance.
  std::array<Eigen::MatrixXd, 2> covariances;
  std::array<double, 2> priors{0.5, 0.5};
  // Cached Cholesky factors and log-determinants of covariances.
  std::array<Eigen::LLT<Eigen::MatrixXd>, 2> factors;
  std::array<double, 2> log_dets{0.0, 0.0};
};

// Gaussian class-conditional model with empirical priors. Covariances are
// the unbiased estimates (pooled over classes for Linear). A covariance that
// is not numerically positive definite gets eps*I added, with
// eps = 1e-6 * mean diagonal.
DiscriminantModel fit_discriminant(const TrainingSet& ts, DiscriminantKind kind);

// score = posterior probability of class 1.
Prediction predict_discriminant(const DiscriminantModel& m, std::span<const double> x);

}  // namespace impair
