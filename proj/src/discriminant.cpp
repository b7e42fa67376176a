#include "impair/discriminant.hpp"

#include <cmath>
#include <numbers>

#include "impair/error.hpp"

namespace impair {

namespace {

// Adds eps*I when the Cholesky factorization fails or is badly conditioned.
Eigen::MatrixXd regularize(Eigen::MatrixXd cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  bool singular = llt.info() != Eigen::Success;
  if (!singular) {
    const Eigen::VectorXd d = llt.matrixL().toDenseMatrix().diagonal();
    singular = d.minCoeff() <= 1e-9 * d.maxCoeff();
  }
  if (singular) {
    const double mean_diag = cov.diagonal().mean();
    const double eps = mean_diag > 0.0 ? 1e-6 * mean_diag : 1e-6;
    cov += eps * Eigen::MatrixXd::Identity(cov.rows(), cov.cols());
  }
  return cov;
}

}  // namespace

DiscriminantModel fit_discriminant(const TrainingSet& ts, DiscriminantKind kind) {
  const std::size_t d = ts.cols;
  std::array<std::size_t, 2> counts{ts.count(Label::Normal), ts.count(Label::Induced)};
  if (counts[0] < 2 || counts[1] < 2) throw Error("fit_discriminant: each class needs at least 2 samples");

  DiscriminantModel m;
  m.kind = kind;
  m.dim = d;
  std::array<Eigen::MatrixXd, 2> scatter;
  for (int c = 0; c < 2; ++c) {
    m.means[c] = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
    scatter[c] = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  }
  for (std::size_t i = 0; i < ts.rows; ++i) {
    const int c = to_int(ts.y[i]);
    m.means[c] += Eigen::Map<const Eigen::VectorXd>(ts.row(i).data(), static_cast<Eigen::Index>(d));
  }
  for (int c = 0; c < 2; ++c) m.means[c] /= static_cast<double>(counts[c]);
  for (std::size_t i = 0; i < ts.rows; ++i) {
    const int c = to_int(ts.y[i]);
    const Eigen::VectorXd r =
        Eigen::Map<const Eigen::VectorXd>(ts.row(i).data(), static_cast<Eigen::Index>(d)) - m.means[c];
    scatter[c] += r * r.transpose();
  }

  const double n = static_cast<double>(ts.rows);
  m.priors = {static_cast<double>(counts[0]) / n, static_cast<double>(counts[1]) / n};
  if (kind == DiscriminantKind::Linear) {
    const Eigen::MatrixXd pooled = regularize((scatter[0] + scatter[1]) / (n - 2.0));
    m.covariances = {pooled, pooled};
  } else {
    for (int c = 0; c < 2; ++c) m.covariances[c] = regularize(scatter[c] / static_cast<double>(counts[c] - 1));
  }
  for (int c = 0; c < 2; ++c) {
    m.factors[c].compute(m.covariances[c]);
    if (m.factors[c].info() != Eigen::Success) throw Error("fit_discriminant: covariance not positive definite");
    m.log_dets[c] = 2.0 * m.factors[c].matrixL().toDenseMatrix().diagonal().array().log().sum();
  }
  return m;
}

Prediction predict_discriminant(const DiscriminantModel& m, std::span<const double> x) {
  require_dim(x, m.dim, "predict_discriminant");
  const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(m.dim));
  std::array<double, 2> log_post{};
  for (int c = 0; c < 2; ++c) {
    const Eigen::VectorXd r = v - m.means[c];
    const double maha = r.dot(m.factors[c].solve(r));
    log_post[c] = std::log(m.priors[c]) - 0.5 * m.log_dets[c] - 0.5 * maha;
  }
  // Logistic of the log-odds; the shared (2*pi)^(d/2) term cancels.
  const double p1 = 1.0 / (1.0 + std::exp(log_post[0] - log_post[1]));
  return {label_from_probability(p1), p1};
}

}  // namespace impair
