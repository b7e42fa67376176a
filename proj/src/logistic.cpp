#include "impair/logistic.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "impair/error.hpp"

namespace impair {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double linear_term(std::span<const double> w, std::span<const double> x) {
  double z = w[0];
  for (std::size_t j = 0; j < x.size(); ++j) z += w[j + 1] * x[j];
  return z;
}

void check_weights(std::span<const double> w, const TrainingSet& ts) {
  if (w.size() != ts.cols + 1) throw Error("logistic: weight vector must have dim + 1 entries");
}

}  // namespace

double logistic_objective(std::span<const double> w, const TrainingSet& ts, double ridge) {
  check_weights(w, ts);
  double ll = 0.0;
  for (std::size_t i = 0; i < ts.rows; ++i) {
    const double z = linear_term(w, ts.row(i));
    // y log s + (1-y) log(1-s) = y z - log(1 + e^z)
    ll += (ts.y[i] == Label::Induced ? z : 0.0) - softplus(z);
  }
  double penalty = 0.0;
  for (std::size_t j = 1; j < w.size(); ++j) penalty += w[j] * w[j];
  return ll - 0.5 * ridge * penalty;
}

std::vector<double> logistic_gradient(std::span<const double> w, const TrainingSet& ts, double ridge) {
  check_weights(w, ts);
  std::vector<double> g(w.size(), 0.0);
  for (std::size_t i = 0; i < ts.rows; ++i) {
    auto x = ts.row(i);
    const double r = (ts.y[i] == Label::Induced ? 1.0 : 0.0) - sigmoid(linear_term(w, x));
    g[0] += r;
    for (std::size_t j = 0; j < x.size(); ++j) g[j + 1] += r * x[j];
  }
  for (std::size_t j = 1; j < w.size(); ++j) g[j] -= ridge * w[j];
  return g;
}

LogisticModel fit_logistic(const TrainingSet& raw, const LogisticOptions& opt) {
  require_both_classes(raw, "fit_logistic");
  LogisticModel m;
  m.dim = raw.cols;
  m.standardizer = opt.standardize ? Standardizer::fit(raw) : Standardizer::identity(raw.cols);
  const TrainingSet ts = m.standardizer.apply(raw);

  const auto p = static_cast<Eigen::Index>(ts.cols + 1);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
  double obj = logistic_objective({w.data(), ts.cols + 1}, ts, opt.ridge);

  for (m.iterations = 0; m.iterations < opt.max_iterations; ++m.iterations) {
    const std::vector<double> gv = logistic_gradient({w.data(), ts.cols + 1}, ts, opt.ridge);
    const Eigen::Map<const Eigen::VectorXd> g(gv.data(), p);
    if (g.lpNorm<Eigen::Infinity>() < opt.gradient_tolerance) break;

    // Negative Hessian: X^T S X + ridge (intercept excluded from the ridge).
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(p, p);
    Eigen::VectorXd xi(p);
    for (std::size_t i = 0; i < ts.rows; ++i) {
      xi(0) = 1.0;
      for (std::size_t j = 0; j < ts.cols; ++j) xi(static_cast<Eigen::Index>(j + 1)) = ts.at(i, j);
      const double s = sigmoid(xi.dot(w));
      h.noalias() += s * (1.0 - s) * xi * xi.transpose();
    }
    for (Eigen::Index j = 1; j < p; ++j) h(j, j) += opt.ridge;
    h += 1e-12 * Eigen::MatrixXd::Identity(p, p);
    const Eigen::VectorXd step = h.ldlt().solve(g);

    double t = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
      const Eigen::VectorXd trial = w + t * step;
      const double trial_obj = logistic_objective({trial.data(), ts.cols + 1}, ts, opt.ridge);
      if (std::isfinite(trial_obj) && trial_obj >= obj) {
        w = trial;
        obj = trial_obj;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }

  m.weights.assign(w.data(), w.data() + p);
  for (double v : m.weights)
    if (!std::isfinite(v)) throw Error("fit_logistic: non-finite weight");
  return m;
}

Prediction predict_logistic(const LogisticModel& m, std::span<const double> x) {
  require_dim(x, m.dim, "predict_logistic");
  const std::vector<double> z = m.standardizer.apply(x);
  const double s = sigmoid(linear_term(m.weights, z));
  return {label_from_probability(s), s};
}

}  // namespace impair
