#pragma once

// Exhaustive active-set solve of the soft-margin dual for a handful of
// points; test-only and independent of the library's solver.

#include <vector>

namespace wristmood::oracle {

struct QpSolution {
  std::vector<double> alpha;
  double rho = 0.0;
  double objective = 0.0;
};

/// points: rows of features; y: +1/-1; RBF kernel exp(-gamma |a-b|^2).
QpSolution brute_force_dual(const std::vector<std::vector<double>>& points,
                            const std::vector<int>& y, double C, double gamma);

/// sum_i alpha_i y_i K(x_i, x) - rho
double oracle_decision(const QpSolution& s, const std::vector<std::vector<double>>& points,
                       const std::vector<int>& y, double gamma, const std::vector<double>& x);

}  // namespace wristmood::oracle
