#pragma once

// Brute-force reference computations shared by the unit tests and the
// acceptance runner. None of these call into the library's algorithms.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "impair/knn.hpp"
#include "impair/rng.hpp"
#include "impair/simulator.hpp"
#include "impair/svm.hpp"
#include "impair/training_set.hpp"

namespace oracle {

using impair::Label;
using impair::TrainingSet;

// ---- tree: exhaustive first split on weighted Gini ----

struct Split {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

inline double gini(double w0, double w1) {
  const double w = w0 + w1;
  if (w <= 0) return 0;
  const double p = w1 / w;
  return 2 * p * (1 - p);
}

inline double split_gain(const TrainingSet& ts, const std::vector<double>& w, int f, double thr) {
  double l0 = 0, l1 = 0, r0 = 0, r1 = 0;
  for (std::size_t i = 0; i < ts.rows; ++i) {
    const bool one = ts.y[i] == Label::Induced;
    if (ts.at(i, static_cast<std::size_t>(f)) <= thr)
      (one ? l1 : l0) += w[i];
    else
      (one ? r1 : r0) += w[i];
  }
  const double tot = l0 + l1 + r0 + r1;
  return tot * gini(l0 + r0, l1 + r1) - (l0 + l1) * gini(l0, l1) - (r0 + r1) * gini(r0, r1);
}

// Same scan order and replacement rule as documented for fit_tree: a later
// candidate wins only when better by more than 1e-12.
inline Split best_split(const TrainingSet& ts, const std::vector<double>& w) {
  Split o;
  for (std::size_t f = 0; f < ts.cols; ++f) {
    std::vector<double> v;
    for (std::size_t i = 0; i < ts.rows; ++i) v.push_back(ts.at(i, f));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
      const double thr = 0.5 * (v[k] + v[k + 1]);
      const double g = split_gain(ts, w, static_cast<int>(f), thr);
      if (g > o.gain + 1e-12) o = {g, static_cast<int>(f), thr};
    }
  }
  return o;
}

// ---- knn: distances and a full sort ----

inline double distance(impair::KnnMetric metric, std::span<const double> a, std::span<const double> b) {
  switch (metric) {
    case impair::KnnMetric::Euclidean: {
      double s = 0;
      for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
      return std::sqrt(s);
    }
    case impair::KnnMetric::Minkowski3: {
      double s = 0;
      for (std::size_t i = 0; i < a.size(); ++i) s += std::pow(std::abs(a[i] - b[i]), 3.0);
      return std::cbrt(s);
    }
    case impair::KnnMetric::Cosine: {
      double ab = 0, aa = 0, bb = 0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
      }
      if (aa == 0 || bb == 0) return 1.0;
      return 1.0 - ab / std::sqrt(aa * bb);
    }
  }
  return 0;
}

inline std::vector<std::size_t> neighbors(const TrainingSet& ts, impair::KnnMetric metric, std::span<const double> q,
                                          std::size_t k) {
  std::vector<std::size_t> idx(ts.rows);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<double> d(ts.rows);
  for (std::size_t i = 0; i < ts.rows; ++i) d[i] = distance(metric, ts.row(i), q);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  idx.resize(std::min(k, ts.rows));
  return idx;
}

// ---- discriminants: Bayes' rule with closed-form 2x2 Gaussians ----

namespace detail {

using Mat2 = std::array<double, 4>;

struct ClassStats {
  double n = 0, mx = 0, my = 0;
  Mat2 scatter{};
};

inline ClassStats stats(const TrainingSet& ts, Label c) {
  ClassStats s;
  for (std::size_t i = 0; i < ts.rows; ++i)
    if (ts.y[i] == c) {
      s.n += 1;
      s.mx += ts.at(i, 0);
      s.my += ts.at(i, 1);
    }
  s.mx /= s.n;
  s.my /= s.n;
  for (std::size_t i = 0; i < ts.rows; ++i)
    if (ts.y[i] == c) {
      const double dx = ts.at(i, 0) - s.mx, dy = ts.at(i, 1) - s.my;
      s.scatter[0] += dx * dx;
      s.scatter[1] += dx * dy;
      s.scatter[2] += dx * dy;
      s.scatter[3] += dy * dy;
    }
  return s;
}

inline double density(double x, double y, double mx, double my, const Mat2& c) {
  const double det = c[0] * c[3] - c[1] * c[2];
  const double dx = x - mx, dy = y - my;
  const double q = (c[3] * dx * dx - (c[1] + c[2]) * dx * dy + c[0] * dy * dy) / det;
  return std::exp(-0.5 * q) / (2 * M_PI * std::sqrt(det));
}

}  // namespace detail

// Posterior of class 1 for two features; pooled covariance when `pooled`.
inline double bayes_posterior(const TrainingSet& ts, bool pooled, double x, double y) {
  const auto a = detail::stats(ts, Label::Normal), b = detail::stats(ts, Label::Induced);
  detail::Mat2 ca{}, cb{};
  for (int k = 0; k < 4; ++k) {
    if (pooled) {
      ca[k] = cb[k] = (a.scatter[k] + b.scatter[k]) / (a.n + b.n - 2);
    } else {
      ca[k] = a.scatter[k] / (a.n - 1);
      cb[k] = b.scatter[k] / (b.n - 1);
    }
  }
  const double n = a.n + b.n;
  const double pa = a.n / n * detail::density(x, y, a.mx, a.my, ca);
  const double pb = b.n / n * detail::density(x, y, b.mx, b.my, cb);
  return pb / (pa + pb);
}

// ---- svm: dual objective and random feasible points ----

inline double sign_of(Label l) { return l == Label::Induced ? 1.0 : -1.0; }

// W(a) = sum a_i - 1/2 sum_ij a_i a_j y_i y_j K(x_i, x_j)
inline double dual_objective(const TrainingSet& ts, const impair::Kernel& k, const std::vector<double>& alpha) {
  double lin = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < ts.rows; ++i) {
    lin += alpha[i];
    for (std::size_t j = 0; j < ts.rows; ++j)
      quad += alpha[i] * alpha[j] * sign_of(ts.y[i]) * sign_of(ts.y[j]) * impair::kernel_value(k, ts.row(i), ts.row(j));
  }
  return lin - 0.5 * quad;
}

// The same objective from a fitted model's support vectors (zero alphas
// contribute nothing).
inline double model_dual_objective(const impair::SvmModel& m) {
  double lin = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < m.support_count(); ++i) {
    lin += std::abs(m.dual_coefs[i]);
    for (std::size_t j = 0; j < m.support_count(); ++j)
      quad += m.dual_coefs[i] * m.dual_coefs[j] *
              impair::kernel_value(m.kernel, m.support_vector(i), m.support_vector(j));
  }
  return lin - 0.5 * quad;
}

// Uniform box draw, then the heavier class is scaled down so that
// sum a_i y_i = 0. Some coordinates are pinned to a bound to reach faces.
inline std::vector<double> random_feasible(impair::Rng& rng, const TrainingSet& ts, double c) {
  std::vector<double> a(ts.rows);
  double pos = 0.0, neg = 0.0;
  for (std::size_t i = 0; i < ts.rows; ++i) {
    const double u = rng.uniform();
    a[i] = u < 0.15 ? 0.0 : (u < 0.3 ? c : rng.uniform() * c);
    (ts.y[i] == Label::Induced ? pos : neg) += a[i];
  }
  const double target = std::min(pos, neg);
  for (std::size_t i = 0; i < ts.rows; ++i) {
    const double total = ts.y[i] == Label::Induced ? pos : neg;
    a[i] = total > 0.0 ? a[i] * target / total : 0.0;
  }
  return a;
}

// ---- simulator: decision rule re-derived from per-window estimates ----

inline bool out_of_range(const impair::ScenarioConfig& cfg, const std::optional<double>& bpm) {
  return bpm && (*bpm < cfg.bpm_low || *bpm > cfg.bpm_high);
}

struct Alert {
  std::optional<impair::AlertReason> reason;
  double offset = 0.0;
  double pulse = 0.0;
};

inline Alert expected_alert(const impair::ScenarioConfig& cfg) {
  using namespace impair;
  const auto windows = estimate_pulse_rate(cancel_noise(generate_pulse_signal(cfg)), cfg.window_s);
  const bool help_in_run = cfg.help_sound_at && *cfg.help_sound_at <= cfg.duration_s;
  const double help = help_in_run ? *cfg.help_sound_at : INFINITY;
  double last = 0.0;
  std::size_t streak = 0;
  for (const auto& w : windows) {
    const double end = w.t_start_s + cfg.window_s;
    if (help < end) return {AlertReason::HelpSound, help, last};
    if (w.bpm) last = *w.bpm;
    streak = out_of_range(cfg, w.bpm) ? streak + 1 : 0;
    if (streak == cfg.consecutive_windows) return {AlertReason::Threshold, end, last};
  }
  if (help_in_run) return {AlertReason::HelpSound, help, last};
  return {};
}

inline impair::ScenarioConfig random_scenario(impair::Rng& rng) {
  impair::ScenarioConfig cfg;
  cfg.true_bpm = 30.0 + rng.uniform() * 170.0;
  cfg.duration_s = 10.0 + rng.uniform() * 50.0;
  cfg.noise_rms = rng.uniform() * 0.4;
  cfg.seed = rng.next_u64();
  cfg.consecutive_windows = 1 + rng.below(5);
  cfg.window_s = rng.below(2) ? 5.0 : 2.0 + rng.uniform() * 6.0;
  cfg.bpm_low = 40.0 + rng.uniform() * 30.0;
  cfg.bpm_high = cfg.bpm_low + 20.0 + rng.uniform() * 80.0;
  if (rng.below(3) == 0) cfg.help_sound_at = rng.uniform() * 70.0;
  if (rng.below(10) == 0) cfg.help_sound_at = std::floor(rng.uniform() * 10.0) * cfg.window_s;
  cfg.lat = rng.uniform() * 180.0 - 90.0;
  cfg.lon = rng.uniform() * 360.0 - 180.0;
  return cfg;
}

// Soundness and completeness of one run, read off its log. Returns an empty
// string when both hold, else a description of the violation.
inline std::string check_alert_properties(const impair::ScenarioConfig& cfg, const impair::SimulationResult& res) {
  using namespace impair;
  if (res.alert && res.alert->reason == AlertReason::Threshold) {
    if (res.log.size() < cfg.consecutive_windows) return "threshold alert without enough windows";
    for (std::size_t k = res.log.size() - cfg.consecutive_windows; k < res.log.size(); ++k)
      if (!out_of_range(cfg, res.log[k].bpm)) return "threshold alert on an in-range window";
    if (res.log.back().t_start_s + cfg.window_s != res.alert_offset_s) return "threshold alert off the window end";
  }
  if (res.alert && res.alert->reason == AlertReason::HelpSound &&
      !(cfg.help_sound_at && *cfg.help_sound_at <= res.alert_offset_s))
    return "help alert before the help event";
  std::size_t streak = 0;
  bool qualifying = cfg.help_sound_at && *cfg.help_sound_at <= cfg.duration_s;
  for (const auto& e : res.log) {
    streak = out_of_range(cfg, e.bpm) ? streak + 1 : 0;
    qualifying |= streak >= cfg.consecutive_windows;
  }
  if (qualifying && !res.alert) return "qualifying run without an alert";
  return {};
}

}  // namespace oracle
