#include "impair/knn.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "impair/error.hpp"

namespace impair {

double knn_distance(KnnMetric metric, std::span<const double> a, std::span<const double> b) {
  switch (metric) {
    case KnnMetric::Euclidean: {
      double s = 0.0;
      for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
      return std::sqrt(s);
    }
    case KnnMetric::Minkowski3: {
      double s = 0.0;
      for (std::size_t j = 0; j < a.size(); ++j) s += std::pow(std::abs(a[j] - b[j]), 3.0);
      return std::cbrt(s);
    }
    case KnnMetric::Cosine: {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (std::size_t j = 0; j < a.size(); ++j) {
        dot += a[j] * b[j];
        na += a[j] * a[j];
        nb += b[j] * b[j];
      }
      if (na == 0.0 || nb == 0.0) return 1.0;
      return 1.0 - dot / std::sqrt(na * nb);
    }
  }
  return 0.0;
}

KnnModel fit_knn(const TrainingSet& ts, const KnnOptions& opt) {
  if (ts.rows == 0) throw Error("fit_knn: empty training set");
  if (opt.k == 0) throw Error("fit_knn: k must be at least 1");
  KnnModel m;
  m.standardizer = opt.standardize ? Standardizer::fit(ts) : Standardizer::identity(ts.cols);
  m.train = m.standardizer.apply(ts);
  m.k = opt.k;
  if (m.k > ts.rows) {
    std::cerr << "warning: KNN k=" << opt.k << " exceeds training size " << ts.rows << ", clamping\n";
    m.k = ts.rows;
  }
  m.metric = opt.metric;
  m.weighting = opt.weighting;
  return m;
}

namespace {

struct Neighbor {
  std::size_t index;
  double distance;
};

std::vector<Neighbor> nearest(const KnnModel& m, std::span<const double> z) {
  std::vector<Neighbor> all(m.train.rows);
  for (std::size_t i = 0; i < m.train.rows; ++i) all[i] = {i, knn_distance(m.metric, m.train.row(i), z)};
  auto closer = [](const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(m.k), all.end(), closer);
  all.resize(m.k);
  return all;
}

}  // namespace

std::vector<std::size_t> knn_neighbors(const KnnModel& m, std::span<const double> x) {
  require_dim(x, m.train.cols, "knn_neighbors");
  std::vector<std::size_t> out;
  for (const Neighbor& nb : nearest(m, m.standardizer.apply(x))) out.push_back(nb.index);
  return out;
}

Prediction knn_predict(const KnnModel& m, std::span<const double> x) {
  if (m.train.rows == 0) throw Error("knn_predict: empty training set");
  require_dim(x, m.train.cols, "knn_predict");
  const auto nbs = nearest(m, m.standardizer.apply(x));

  double w1 = 0.0;
  double total = 0.0;
  if (m.weighting == KnnWeighting::SquaredInverse && nbs.front().distance == 0.0) {
    for (const Neighbor& nb : nbs) {
      if (nb.distance != 0.0) break;
      total += 1.0;
      if (m.train.y[nb.index] == Label::Induced) w1 += 1.0;
    }
  } else {
    for (const Neighbor& nb : nbs) {
      const double w = m.weighting == KnnWeighting::Uniform ? 1.0 : 1.0 / (nb.distance * nb.distance);
      total += w;
      if (m.train.y[nb.index] == Label::Induced) w1 += w;
    }
  }
  const double score = w1 / total;
  return {label_from_probability(score), score};
}

}  // namespace impair
