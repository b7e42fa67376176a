#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "impair/rng.hpp"
#include "impair/training_set.hpp"

namespace testing {

// Random two-class training set with both classes present.
inline impair::TrainingSet random_set(impair::Rng& rng, std::size_t rows, std::size_t cols, double shift = 1.0) {
  impair::TrainingSet ts;
  ts.rows = rows;
  ts.cols = cols;
  for (std::size_t i = 0; i < rows; ++i) {
    const impair::Label y = (i % 2 == 0) ? impair::Label::Normal : impair::Label::Induced;
    ts.y.push_back(y);
    for (std::size_t j = 0; j < cols; ++j) ts.x.push_back(rng.normal() + (y == impair::Label::Induced ? shift : 0.0));
  }
  return ts;
}

inline impair::TrainingSet make_set(const std::vector<std::vector<double>>& x, const std::vector<int>& y) {
  impair::TrainingSet ts;
  ts.rows = x.size();
  ts.cols = x.empty() ? 0 : x.front().size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    ts.x.insert(ts.x.end(), x[i].begin(), x[i].end());
    ts.y.push_back(y[i] ? impair::Label::Induced : impair::Label::Normal);
  }
  return ts;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("impair_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace testing
