#include "wristmood/stats.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/tools/roots.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "wristmood/error.hpp"

namespace wristmood::stats {

double mean(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_std(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size() - 1));
}

namespace {

struct Partition {
  std::vector<double> means;
  std::vector<double> sizes;
  double ss_between = 0.0;
  double ss_within = 0.0;
  int df_between = 0;
  int df_within = 0;
};

Partition partition(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) fail(ErrorCode::kInvalidArgument, "need at least two groups");
  Partition p;
  double total = 0.0;
  std::size_t n = 0;
  for (const auto& g : groups) {
    if (g.size() < 2) fail(ErrorCode::kInvalidArgument, "every group needs at least two values");
    for (double v : g)
      if (!std::isfinite(v)) fail(ErrorCode::kInvalidArgument, "non-finite value in group");
    p.means.push_back(mean(g));
    p.sizes.push_back(static_cast<double>(g.size()));
    total += std::accumulate(g.begin(), g.end(), 0.0);
    n += g.size();
  }
  const double grand = total / static_cast<double>(n);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    p.ss_between += p.sizes[i] * (p.means[i] - grand) * (p.means[i] - grand);
    for (double v : groups[i]) p.ss_within += (v - p.means[i]) * (v - p.means[i]);
  }
  p.df_between = static_cast<int>(groups.size()) - 1;
  p.df_within = static_cast<int>(n - groups.size());
  return p;
}

constexpr double kTiny = 1e-300;

}  // namespace

double f_upper_tail(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) fail(ErrorCode::kInvalidArgument, "degrees of freedom must be positive");
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return boost::math::ibeta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups) {
  const auto p = partition(groups);
  AnovaResult r;
  r.df_between = p.df_between;
  r.df_within = p.df_within;
  r.ms_between = p.ss_between / p.df_between;
  r.ms_within = p.ss_within / p.df_within;
  if (r.ms_within <= kTiny) {
    r.degenerate = true;
    if (r.ms_between <= kTiny) {
      r.F = 0.0;
      r.p = 1.0;
    } else {
      r.F = std::numeric_limits<double>::infinity();
      r.p = 0.0;
    }
    return r;
  }
  r.F = r.ms_between / r.ms_within;
  r.p = f_upper_tail(r.F, p.df_between, p.df_within);
  return r;
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

// P(range of k standard normals <= w).
double range_cdf(double w, int k) {
  if (w <= 0.0) return 0.0;
  auto f = [&](double z) {
    const double inside = normal_cdf(z) - normal_cdf(z - w);
    return normal_pdf(z) * std::pow(inside, k - 1);
  };
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, -9.0, 9.0 + w, 15, 1e-12);
  return std::min(1.0, k * v);
}

}  // namespace

double studentized_range_cdf(double q, int k, double df) {
  if (k < 2) fail(ErrorCode::kInvalidArgument, "studentized range needs k >= 2");
  if (!(df > 0.0)) fail(ErrorCode::kInvalidArgument, "degrees of freedom must be positive");
  if (q <= 0.0) return 0.0;
  if (std::isinf(df)) return range_cdf(q, k);
  // s = sqrt(chi2_df / df) has density proportional to s^(df-1) exp(-df s^2 / 2).
  const double log_norm =
      0.5 * df * std::log(df) - std::lgamma(0.5 * df) - (0.5 * df - 1.0) * std::log(2.0);
  auto g = [&](double s) {
    if (s <= 0.0) return 0.0;
    const double log_density = log_norm + (df - 1.0) * std::log(s) - 0.5 * df * s * s;
    return std::exp(log_density) * range_cdf(q * s, k);
  };
  const double spread = 10.0 / std::sqrt(df);
  const double lo = std::max(0.0, 1.0 - spread);
  const double hi = 1.0 + spread;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, lo, hi, 15, 1e-12);
  return std::clamp(v, 0.0, 1.0);
}

double studentized_range_quantile(double alpha, int k, double df) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorCode::kInvalidArgument, "alpha must be in (0, 1)");
  auto h = [&](double q) { return (1.0 - studentized_range_cdf(q, k, df)) - alpha; };
  double lo = 0.0, hi = 4.0;
  while (h(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) fail(ErrorCode::kInternal, "studentized range quantile did not bracket");
  }
  std::uintmax_t iters = 200;
  const auto root = boost::math::tools::toms748_solve(
      h, lo, hi, [](double a, double b) { return std::fabs(a - b) < 1e-9; }, iters);
  return 0.5 * (root.first + root.second);
}

TukeyResult tukey_hsd(const std::vector<std::vector<double>>& groups,
                      const std::vector<double>& alphas) {
  const auto p = partition(groups);
  const double msw = p.ss_within / p.df_within;
  const int k = static_cast<int>(groups.size());
  TukeyResult r;
  r.alphas = alphas;
  for (double a : alphas) r.critical.push_back(studentized_range_quantile(a, k, p.df_within));
  r.degenerate = msw <= kTiny;
  for (std::size_t i = 0; i < groups.size(); ++i)
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      TukeyPair tp;
      tp.i = i;
      tp.j = j;
      tp.mean_diff = p.means[i] - p.means[j];
      const double diff = std::fabs(tp.mean_diff);
      if (r.degenerate) {
        tp.q = diff > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
      } else {
        tp.q = diff / std::sqrt(msw / 2.0 * (1.0 / p.sizes[i] + 1.0 / p.sizes[j]));
      }
      for (double c : r.critical) tp.significant.push_back(tp.q > c);
      r.pairs.push_back(std::move(tp));
    }
  return r;
}

}  // namespace wristmood::stats
