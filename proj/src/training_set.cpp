#include "impair/training_set.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "impair/error.hpp"

namespace impair {

TrainingSet TrainingSet::subset_rows(std::span<const std::size_t> idx) const {
  TrainingSet out;
  out.rows = idx.size();
  out.cols = cols;
  out.x.reserve(idx.size() * cols);
  out.y.reserve(idx.size());
  for (std::size_t i : idx) {
    auto r = row(i);
    out.x.insert(out.x.end(), r.begin(), r.end());
    out.y.push_back(y[i]);
  }
  return out;
}

TrainingSet TrainingSet::subset_cols(std::span<const std::size_t> features) const {
  TrainingSet out;
  out.rows = rows;
  out.cols = features.size();
  out.y = y;
  out.x.reserve(rows * features.size());
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t f : features) out.x.push_back(at(i, f));
  return out;
}

std::size_t TrainingSet::count(Label l) const {
  return static_cast<std::size_t>(std::count(y.begin(), y.end(), l));
}

TrainingSet to_training_set(const Dataset& ds) {
  TrainingSet ts;
  ts.rows = ds.size();
  ts.cols = 2;
  ts.x.reserve(ts.rows * 2);
  ts.y.reserve(ts.rows);
  for (const Sample& s : ds.samples) {
    ts.x.push_back(s.bac);
    ts.x.push_back(s.pulse_rate);
    ts.y.push_back(s.target);
  }
  return ts;
}

void require_both_classes(const TrainingSet& ts, const char* who) {
  if (ts.rows < 2) throw Error(std::string(who) + ": need at least 2 training rows");
  if (ts.count(Label::Normal) == 0 || ts.count(Label::Induced) == 0)
    throw Error(std::string(who) + ": training data must contain both classes");
}

void require_dim(std::span<const double> x, std::size_t dim, const char* who) {
  if (x.size() != dim)
    throw Error(std::string(who) + ": feature vector has length " + std::to_string(x.size()) + ", model expects " +
                std::to_string(dim));
}

Standardizer Standardizer::fit(const TrainingSet& ts) {
  Standardizer s;
  s.mean.assign(ts.cols, 0.0);
  s.scale.assign(ts.cols, 1.0);
  if (ts.rows == 0) return s;
  for (std::size_t j = 0; j < ts.cols; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < ts.rows; ++i) sum += ts.at(i, j);
    const double m = sum / static_cast<double>(ts.rows);
    double ss = 0.0;
    for (std::size_t i = 0; i < ts.rows; ++i) ss += (ts.at(i, j) - m) * (ts.at(i, j) - m);
    const double sd = ts.rows > 1 ? std::sqrt(ss / static_cast<double>(ts.rows - 1)) : 0.0;
    s.mean[j] = m;
    s.scale[j] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

Standardizer Standardizer::identity(std::size_t cols) {
  return Standardizer{std::vector<double>(cols, 0.0), std::vector<double>(cols, 1.0)};
}

std::vector<double> Standardizer::apply(std::span<const double> x) const {
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - mean[j]) / scale[j];
  return out;
}

TrainingSet Standardizer::apply(const TrainingSet& ts) const {
  TrainingSet out = ts;
  for (std::size_t i = 0; i < ts.rows; ++i)
    for (std::size_t j = 0; j < ts.cols; ++j) out.x[i * ts.cols + j] = (ts.at(i, j) - mean[j]) / scale[j];
  return out;
}

}  // namespace impair
