#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wristmood/error.hpp"
#include "wristmood/matrix.hpp"

namespace wristmood::svm {

/// Per-feature min/max mapping onto [-1, 1]. Constant features map to 0.
/// Values outside the training range are not clamped.
struct Scaler {
  std::vector<double> min;
  std::vector<double> max;

  static Scaler fit(const Matrix& train);
  std::size_t dim() const { return min.size(); }
  std::vector<double> apply(std::span<const double> x) const;
  Matrix apply(const Matrix& x) const;

  friend bool operator==(const Scaler&, const Scaler&) = default;
};

/// exp(-gamma * |a - b|^2)
double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

/// Binary RBF soft-margin classifier: f(x) = sum coef_i K(sv_i, x) - rho,
/// coef_i = alpha_i * y_i, predicting positive_label when f(x) > 0.
struct BinarySvm {
  Matrix support_vectors;
  std::vector<double> coef;
  double rho = 0.0;
  double gamma = 1.0;
  double C = 1.0;
  int positive_label = 1;
  int negative_label = -1;
  std::size_t iterations = 0;
  bool converged = true;

  double decision(std::span<const double> x) const;
  int predict(std::span<const double> x) const {
    return decision(x) > 0.0 ? positive_label : negative_label;
  }
};

struct SolverOptions {
  double tol = 1e-3;
  std::size_t max_iterations = 10'000'000;
};

/// Solves the dual with two-variable working sets (maximal violating pair
/// for the first index, second-order gain for the second) and stops when
/// the maximal KKT violation drops below tol. y holds +1/-1.
BinarySvm train_binary(const Matrix& x, std::span<const int> y, double C, double gamma,
                       const SolverOptions& options = {});

/// Scaler plus one-vs-one ensemble over `classes` (ascending). Pair order is
/// (0,1), (0,2), ..., (k-2,k-1); each pair's positive class is the first.
struct SvmModel {
  Scaler scaler;
  std::vector<int> classes;
  std::vector<std::string> class_names;  // parallel to classes, may be empty
  std::vector<BinarySvm> pairs;
  double C = 1.0;
  double gamma = 1.0;
  std::uint64_t seed = 0;
  double cv_accuracy = 0.0;
  std::string target;

  /// Votes of every pairwise classifier; ties go to the class listed first.
  int predict(std::span<const double> raw) const;
  std::vector<int> votes(std::span<const double> raw) const;
};

/// Fits the scaler on `raw` and trains the one-vs-one ensemble.
SvmModel train_model(const Matrix& raw, std::span<const int> labels, double C, double gamma,
                     const SolverOptions& options = {});

/// Majority vote over pairwise decisions, index-based (no scaling).
int vote(std::span<const int> classes, std::span<const double> pair_decisions);

struct FoldAssignment {
  std::vector<int> fold;  // per example, in [0, folds)
  bool degraded = false;  // some class has fewer members than folds
};

/// Per class, members are shuffled with the seed and dealt round-robin to
/// the folds.
FoldAssignment stratified_folds(std::span<const int> labels, int folds, std::uint64_t seed);

struct GridOptions {
  std::vector<int> c_exponents = {-5, -3, -1, 1, 3, 5, 7, 9, 11, 13, 15};
  std::vector<int> gamma_exponents = {-15, -13, -11, -9, -7, -5, -3, -1, 1, 3};
  int folds = 5;
  std::uint64_t seed = 0;
  SolverOptions solver;
};

struct GridPoint {
  double C = 0.0;
  double gamma = 0.0;
  std::size_t correct = 0;
};

struct GridResult {
  double C = 0.0;
  double gamma = 0.0;
  double cv_accuracy = 0.0;
  std::vector<GridPoint> table;  // row-major over (C, gamma)
  FoldAssignment folds;
  std::vector<std::string> notes;
};

/// Stratified k-fold accuracy for each (C, gamma) on already scaled data.
/// Ties prefer smaller C, then smaller gamma.
GridResult grid_search(const Matrix& scaled, std::span<const int> labels,
                       const GridOptions& options);

/// Full training pipeline on raw features: scaler, grid search, final fit.
SvmModel fit_with_grid_search(const Matrix& raw, std::span<const int> labels,
                              const GridOptions& options, std::vector<std::string>* notes = nullptr);

void save_model(const std::string& path, const SvmModel& model);
SvmModel load_model(const std::string& path);
std::string model_to_json(const SvmModel& model);
SvmModel model_from_json(const std::string& text);

}  // namespace wristmood::svm
