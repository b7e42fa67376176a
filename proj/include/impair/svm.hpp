#pragma once

#include <span>
#include <vector>

#include "impair/error.hpp"
#include "impair/training_set.hpp"

namespace impair {

struct Kernel {
  enum class Type { Linear, Polynomial, Gaussian };
  Type type = Type::Linear;
  int degree = 2;      // Polynomial: (1 + a.b)^degree
  double scale = 1.0;  // Gaussian: exp(-|a-b|^2 / scale^2)

  static Kernel linear() { return {}; }
  static Kernel polynomial(int degree) { return {Type::Polynomial, degree, 1.0}; }
  static Kernel gaussian(double scale) { return {Type::Gaussian, 2, scale}; }
};

double kernel_value(const Kernel& k, std::span<const double> a, std::span<const double> b);

struct SvmOptions {
  double box_constraint = 1.0;
  double tolerance = 1e-3;  // maximal KKT violation at convergence
  std::size_t max_iterations = 100'000;
  bool standardize = true;
};

struct SvmModel {
  Kernel kernel;
  std::size_t dim = 0;
  double box_constraint = 1.0;
  std::vector<double> support_vectors;  // row-major, dim columns, standardized space
  std::vector<double> dual_coefs;       // y_i * alpha_i, each nonzero
  double bias = 0.0;
  Standardizer standardizer;
  std::size_t iterations = 0;
  double kkt_gap = 0.0;  // max violating pair gap at exit

  std::size_t support_count() const { return dual_coefs.size(); }
  std::span<const double> support_vector(std::size_t i) const { return {support_vectors.data() + i * dim, dim}; }
};

class SvmConvergenceError : public Error {
 public:
  SvmConvergenceError(std::size_t iterations, double gap)
      : Error("fit_svm: SMO did not converge after " + std::to_string(iterations) +
              " iterations (KKT gap " + std::to_string(gap) + ")"),
        iterations_(iterations),
        gap_(gap) {}
  std::size_t iterations() const { return iterations_; }
  double gap() const { return gap_; }

 private:
  std::size_t iterations_;
  double gap_;
};

// Soft-margin C-SVM dual solved by SMO with second-order working-set
// selection. Labels map Normal -> -1, Induced -> +1.
SvmModel fit_svm(const TrainingSet& ts, const Kernel& kernel, const SvmOptions& opt = {});

// score = decision function value; label Induced iff score >= 0.
Prediction predict_svm(const SvmModel& m, std::span<const double> x);

}  // namespace impair
