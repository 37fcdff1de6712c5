#pragma once

#include <cstddef>
#include <vector>

namespace wristmood::stats {

double mean(const std::vector<double>& x);
/// Sample (n - 1) standard deviation; 0 for fewer than two values.
double sample_std(const std::vector<double>& x);

struct AnovaResult {
  double F = 0.0;
  double p = 1.0;
  double ms_between = 0.0;
  double ms_within = 0.0;
  int df_between = 0;
  int df_within = 0;
  bool degenerate = false;  // ms_within == 0
};

/// One-way ANOVA. Each group needs at least two values.
AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups);

/// P(F > f) for the F distribution with (d1, d2) degrees of freedom.
double f_upper_tail(double f, double d1, double d2);

/// P(Q <= q) for the studentized range of k means with df degrees of freedom.
double studentized_range_cdf(double q, int k, double df);

/// Upper quantile: the q with P(Q > q) = alpha.
double studentized_range_quantile(double alpha, int k, double df);

struct TukeyPair {
  std::size_t i = 0;
  std::size_t j = 0;
  double mean_diff = 0.0;  // mean_i - mean_j
  double q = 0.0;
  std::vector<bool> significant;  // parallel to TukeyResult::alphas
};

struct TukeyResult {
  std::vector<double> alphas;
  std::vector<double> critical;  // q(alpha; k, N - k)
  std::vector<TukeyPair> pairs;  // (0,1), (0,2), ..., (k-2,k-1)
  bool degenerate = false;
};

/// Tukey-Kramer honest significant difference test.
TukeyResult tukey_hsd(const std::vector<std::vector<double>>& groups,
                      const std::vector<double>& alphas = {0.05, 0.01, 0.001});

}  // namespace wristmood::stats
