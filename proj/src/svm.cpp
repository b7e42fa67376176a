#include "impair/svm.hpp"

#include <cmath>
#include <limits>

namespace impair {

double kernel_value(const Kernel& k, std::span<const double> a, std::span<const double> b) {
  switch (k.type) {
    case Kernel::Type::Linear: {
      double dot = 0.0;
      for (std::size_t j = 0; j < a.size(); ++j) dot += a[j] * b[j];
      return dot;
    }
    case Kernel::Type::Polynomial: {
      double dot = 0.0;
      for (std::size_t j = 0; j < a.size(); ++j) dot += a[j] * b[j];
      return std::pow(1.0 + dot, k.degree);
    }
    case Kernel::Type::Gaussian: {
      double d2 = 0.0;
      for (std::size_t j = 0; j < a.size(); ++j) d2 += (a[j] - b[j]) * (a[j] - b[j]);
      return std::exp(-d2 / (k.scale * k.scale));
    }
  }
  return 0.0;
}

namespace {

constexpr double kTau = 1e-12;

}  // namespace

SvmModel fit_svm(const TrainingSet& raw, const Kernel& kernel, const SvmOptions& opt) {
  require_both_classes(raw, "fit_svm");
  if (!(opt.box_constraint > 0.0)) throw Error("fit_svm: box constraint must be positive");
  if (kernel.type == Kernel::Type::Gaussian && !(kernel.scale > 0.0))
    throw Error("fit_svm: gaussian kernel scale must be positive");

  SvmModel m;
  m.kernel = kernel;
  m.dim = raw.cols;
  m.box_constraint = opt.box_constraint;
  m.standardizer = opt.standardize ? Standardizer::fit(raw) : Standardizer::identity(raw.cols);
  const TrainingSet ts = m.standardizer.apply(raw);

  const std::size_t n = ts.rows;
  const double c = opt.box_constraint;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = ts.y[i] == Label::Induced ? 1.0 : -1.0;

  std::vector<double> kmat(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) kmat[i * n + j] = kmat[j * n + i] = kernel_value(kernel, ts.row(i), ts.row(j));
  auto q = [&](std::size_t i, std::size_t j) { return y[i] * y[j] * kmat[i * n + j]; };

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of 1/2 a'Qa - e'a
  auto in_up = [&](std::size_t t) { return (y[t] > 0 && alpha[t] < c) || (y[t] < 0 && alpha[t] > 0); };
  auto in_low = [&](std::size_t t) { return (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < c); };

  double gap = std::numeric_limits<double>::infinity();
  std::size_t iter = 0;
  for (;; ++iter) {
    // Working set: i maximizes -y G over I_up; j minimizes the second-order
    // objective decrease over I_low.
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t)
      if (in_up(t) && -y[t] * grad[t] > gmax) {
        gmax = -y[t] * grad[t];
        i = t;
      }
    double gmin = std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      const double v = -y[t] * grad[t];
      gmin = std::min(gmin, v);
      if (i == n) continue;
      const double b = gmax - v;
      if (b > 0.0) {
        double a = kmat[i * n + i] + kmat[t * n + t] - 2.0 * kmat[i * n + t];
        if (a <= 0.0) a = kTau;
        const double score = -(b * b) / a;
        if (score < best) {
          best = score;
          j = t;
        }
      }
    }
    gap = gmax - gmin;
    if (i == n || j == n || gap < opt.tolerance) break;
    if (iter >= opt.max_iterations) throw SvmConvergenceError(iter, gap);

    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    if (y[i] != y[j]) {
      double quad = kmat[i * n + i] + kmat[j * n + j] + 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = kmat[i * n + i] + kmat[j * n + j] - 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0) {
        alpha[j] = 0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = sum;
      }
    }

    const double dai = alpha[i] - old_ai;
    const double daj = alpha[j] - old_aj;
    for (std::size_t t = 0; t < n; ++t) grad[t] += q(t, i) * dai + q(t, j) * daj;
  }

  // Offset: average y*G over free vectors, else the midpoint of the feasible
  // interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= c) {
      if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0) {
      if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++free_count;
      sum_free += yg;
    }
  }
  const double rho = free_count > 0 ? sum_free / static_cast<double>(free_count) : 0.5 * (ub + lb);
  m.bias = -rho;

  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] <= 0.0) continue;
    auto r = ts.row(t);
    m.support_vectors.insert(m.support_vectors.end(), r.begin(), r.end());
    m.dual_coefs.push_back(y[t] * alpha[t]);
  }
  m.iterations = iter;
  m.kkt_gap = gap;
  return m;
}

Prediction predict_svm(const SvmModel& m, std::span<const double> x) {
  require_dim(x, m.dim, "predict_svm");
  const std::vector<double> z = m.standardizer.apply(x);
  double f = m.bias;
  for (std::size_t i = 0; i < m.support_count(); ++i) f += m.dual_coefs[i] * kernel_value(m.kernel, m.support_vector(i), z);
  return {label_from_margin(f), f};
}

}  // namespace impair
