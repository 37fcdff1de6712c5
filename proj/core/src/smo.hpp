#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wristmood/matrix.hpp"
#include "wristmood/svm.hpp"

namespace wristmood::svm::detail {

/// Row-major symmetric kernel matrix over a pool of points.
struct KernelView {
  const double* data = nullptr;
  std::size_t stride = 0;
  double operator()(std::size_t a, std::size_t b) const { return data[a * stride + b]; }
};

struct DualSolution {
  std::vector<double> alpha;
  double rho = 0.0;
  std::size_t iterations = 0;
  bool converged = true;
};

/// Dual soft-margin solver on the pool subset `index` with labels y (+1/-1).
DualSolution solve_dual(const KernelView& kernel, std::span<const std::size_t> index,
                        std::span<const int> y, double C, const SolverOptions& options);

/// n x n squared Euclidean distances between rows.
std::vector<double> squared_distances(const Matrix& x);

std::vector<double> rbf_gram(std::span<const double> squared, double gamma);

}  // namespace wristmood::svm::detail
