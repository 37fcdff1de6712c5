#include "smo.hpp"

#include <cmath>
#include <limits>

namespace wristmood::svm::detail {

namespace {
constexpr double kTau = 1e-12;
}

DualSolution solve_dual(const KernelView& kernel, std::span<const std::size_t> index,
                        std::span<const int> y, double C, const SolverOptions& options) {
  const std::size_t n = index.size();
  DualSolution sol;
  sol.alpha.assign(n, 0.0);
  std::vector<double> grad(n, -1.0);
  std::vector<double> diag(n);
  for (std::size_t t = 0; t < n; ++t) diag[t] = kernel(index[t], index[t]);
  std::vector<double> qi(n), qj(n);
  auto& alpha = sol.alpha;

  auto load_row = [&](std::size_t i, std::vector<double>& q) {
    const double* row = kernel.data + index[i] * kernel.stride;
    const double yi = y[i];
    for (std::size_t t = 0; t < n; ++t) q[t] = yi * y[t] * row[index[t]];
  };

  const double inf = std::numeric_limits<double>::infinity();
  std::size_t iter = 0;
  for (;; ++iter) {
    if (iter >= options.max_iterations) {
      sol.converged = false;
      break;
    }
    // First index: maximal violation among the "up" set.
    double gmax = -inf;
    std::ptrdiff_t i = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] > 0) {
        if (alpha[t] < C && -grad[t] >= gmax) {
          gmax = -grad[t];
          i = static_cast<std::ptrdiff_t>(t);
        }
      } else if (alpha[t] > 0.0 && grad[t] >= gmax) {
        gmax = grad[t];
        i = static_cast<std::ptrdiff_t>(t);
      }
    }
    if (i < 0) break;
    const auto ui = static_cast<std::size_t>(i);
    load_row(ui, qi);
    // Second index: largest second-order decrease among the "low" set.
    double gmax2 = -inf;
    double obj_min = inf;
    std::ptrdiff_t j = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] > 0) {
        if (alpha[t] > 0.0) {
          const double diff = gmax + grad[t];
          if (grad[t] >= gmax2) gmax2 = grad[t];
          if (diff > 0.0) {
            double quad = diag[ui] + diag[t] - 2.0 * y[ui] * qi[t];
            const double obj = -(diff * diff) / (quad > 0.0 ? quad : kTau);
            if (obj <= obj_min) {
              obj_min = obj;
              j = static_cast<std::ptrdiff_t>(t);
            }
          }
        }
      } else if (alpha[t] < C) {
        const double diff = gmax - grad[t];
        if (-grad[t] >= gmax2) gmax2 = -grad[t];
        if (diff > 0.0) {
          double quad = diag[ui] + diag[t] + 2.0 * y[ui] * qi[t];
          const double obj = -(diff * diff) / (quad > 0.0 ? quad : kTau);
          if (obj <= obj_min) {
            obj_min = obj;
            j = static_cast<std::ptrdiff_t>(t);
          }
        }
      }
    }
    if (gmax + gmax2 < options.tol || j < 0) break;
    const auto uj = static_cast<std::size_t>(j);
    load_row(uj, qj);

    const double old_ai = alpha[ui], old_aj = alpha[uj];
    if (y[ui] != y[uj]) {
      double quad = diag[ui] + diag[uj] + 2.0 * qi[uj];
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[ui] - grad[uj]) / quad;
      const double diff = alpha[ui] - alpha[uj];
      alpha[ui] += delta;
      alpha[uj] += delta;
      if (diff > 0.0) {
        if (alpha[uj] < 0.0) {
          alpha[uj] = 0.0;
          alpha[ui] = diff;
        }
      } else if (alpha[ui] < 0.0) {
        alpha[ui] = 0.0;
        alpha[uj] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[ui] > C) {
          alpha[ui] = C;
          alpha[uj] = C - diff;
        }
      } else if (alpha[uj] > C) {
        alpha[uj] = C;
        alpha[ui] = C + diff;
      }
    } else {
      double quad = diag[ui] + diag[uj] - 2.0 * qi[uj];
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[ui] - grad[uj]) / quad;
      const double sum = alpha[ui] + alpha[uj];
      alpha[ui] -= delta;
      alpha[uj] += delta;
      if (sum > C) {
        if (alpha[ui] > C) {
          alpha[ui] = C;
          alpha[uj] = sum - C;
        }
      } else if (alpha[uj] < 0.0) {
        alpha[uj] = 0.0;
        alpha[ui] = sum;
      }
      if (sum > C) {
        if (alpha[uj] > C) {
          alpha[uj] = C;
          alpha[ui] = sum - C;
        }
      } else if (alpha[ui] < 0.0) {
        alpha[ui] = 0.0;
        alpha[uj] = sum;
      }
    }
    const double dai = alpha[ui] - old_ai, daj = alpha[uj] - old_aj;
    for (std::size_t t = 0; t < n; ++t) grad[t] += qi[t] * dai + qj[t] * daj;
  }
  sol.iterations = iter;

  double ub = inf, lb = -inf, sum_free = 0.0;
  std::size_t free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= C) {
      if (y[t] < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++free;
      sum_free += yg;
    }
  }
  sol.rho = free > 0 ? sum_free / static_cast<double>(free) : 0.5 * (ub + lb);
  return sol;
}

std::vector<double> squared_distances(const Matrix& x) {
  const std::size_t n = x.rows();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    auto ra = x.row(a);
    for (std::size_t b = a + 1; b < n; ++b) {
      auto rb = x.row(b);
      double s = 0.0;
      for (std::size_t c = 0; c < ra.size(); ++c) {
        const double diff = ra[c] - rb[c];
        s += diff * diff;
      }
      d[a * n + b] = s;
      d[b * n + a] = s;
    }
  }
  return d;
}

std::vector<double> rbf_gram(std::span<const double> squared, double gamma) {
  std::vector<double> k(squared.size());
  for (std::size_t i = 0; i < squared.size(); ++i) k[i] = std::exp(-gamma * squared[i]);
  return k;
}

}  // namespace wristmood::svm::detail
