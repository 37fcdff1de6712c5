#include "feature_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace wristmood::oracle {

namespace {

using Vec = std::vector<double>;

double mean(const Vec& v) {
  double s = 0;
  for (double a : v) s += a;
  return s / static_cast<double>(v.size());
}

double pop_var(const Vec& v) {
  const double m = mean(v);
  double s = 0;
  for (double a : v) s += (a - m) * (a - m);
  return s / static_cast<double>(v.size());
}

double pop_std(const Vec& v) { return std::sqrt(pop_var(v)); }

Vec first_diff(const Vec& v) {
  Vec d;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) d.push_back(v[i + 1] - v[i]);
  return d;
}

Vec second_diff(const Vec& v) {
  Vec d;
  for (std::size_t i = 0; i + 2 < v.size(); ++i) d.push_back(v[i + 2] - 2.0 * v[i + 1] + v[i]);
  return d;
}

double mean_abs(const Vec& v) {
  double s = 0;
  for (double a : v) s += std::abs(a);
  return s / static_cast<double>(v.size());
}

bool flat(const Vec& v) { return pop_std(v) <= 1e-12 * std::max(1.0, std::abs(mean(v))); }

Vec zscore(const Vec& v) {
  const double m = mean(v), s = pop_std(v);
  Vec z;
  for (double a : v) z.push_back((a - m) / s);
  return z;
}

double percentile(Vec v, double p) {
  std::sort(v.begin(), v.end());
  const double pos = p / 100.0 * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

Vec smooth(const Vec& v, std::size_t w) {
  Vec out;
  const long n = static_cast<long>(v.size());
  const long back = static_cast<long>((w - 1) / 2), fwd = static_cast<long>(w / 2);
  for (long i = 0; i < n; ++i) {
    double s = 0;
    long c = 0;
    for (long j = i - back; j <= i + fwd; ++j) {
      if (j < 0 || j >= n) continue;
      s += v[static_cast<std::size_t>(j)];
      ++c;
    }
    out.push_back(s / static_cast<double>(c));
  }
  return out;
}

std::size_t width_for(double seconds, double rate) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(seconds * rate)));
}

void time_features(const std::string& sig, const OracleSignal& s, double smooth_s, bool smfd,
                   double smfd_s, std::map<std::string, double>& out) {
  const Vec& x = s.x;
  const double n = static_cast<double>(x.size());
  const double r = s.rate;
  const bool is_flat = flat(x);
  const Vec d1 = first_diff(x), d2 = second_diff(x);
  double sumsq = 0, sum = 0, cubic = 0, quartic = 0, mad = 0;
  const double m = mean(x);
  for (double a : x) {
    sumsq += a * a;
    sum += a;
    cubic += std::pow(a - m, 3);
    quartic += std::pow(a - m, 4);
    mad += std::abs(a - m);
  }
  const double sd = pop_std(x);
  double arc = 0;
  for (double d : d1) arc += std::sqrt(1.0 + d * d);
  const double integral = sum / r;

  auto put = [&](const char* name, double v) { out[sig + "." + name] = v; };
  put("MAX", *std::max_element(x.begin(), x.end()));
  put("MIN", *std::min_element(x.begin(), x.end()));
  put("MEAN", m);
  put("AMP", *std::max_element(x.begin(), x.end()) - *std::min_element(x.begin(), x.end()));
  put("DR", *std::max_element(x.begin(), x.end()) - *std::min_element(x.begin(), x.end()));
  put("VAR", pop_var(x));
  put("STD", sd);
  put("RMS", std::sqrt(sumsq / n));
  put("P90", percentile(x, 90));
  put("MAD", mad / n);
  put("NORM", std::sqrt(sumsq));
  put("MAVFD", mean_abs(d1));
  put("MAVFDN", is_flat ? 0.0 : mean_abs(first_diff(zscore(x))));
  put("MAVSD", mean_abs(d2));
  put("MAVSDN", is_flat ? 0.0 : mean_abs(second_diff(zscore(x))));
  Vec d1r, d2r;
  for (double d : d1) d1r.push_back(d * r);
  for (double d : d2) d2r.push_back(d * r * r);
  put("FDM", mean(d1r));
  put("FDSTD", pop_std(d1r));
  put("SDM", mean(d2r));
  put("SDSTD", pop_std(d2r));
  put("AL", arc);
  put("I", integral);
  put("NAP", sumsq / n);
  put("NRMS", std::sqrt(sumsq / n));
  put("APR", integral / arc);
  put("EPR", sumsq / arc);
  put("CM", cubic / n);
  put("SKEW", is_flat ? 0.0 : (cubic / n) / std::pow(sd, 3));
  put("KURT", is_flat ? 0.0 : (quartic / n) / std::pow(sd, 4));
  {
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double t = static_cast<double>(i) / r;
      st += t;
      sy += x[i];
      stt += t * t;
      sty += t * x[i];
    }
    const double slope = (n * sty - st * sy) / (n * stt - st * st);
    put("SRL", slope);
    put("IRL", (sy - slope * st) / n);
  }
  put("SM", mean(smooth(x, width_for(smooth_s, r))));
  put("MFD", mean(d1));
  if (smfd) put("SMFD", mean_abs(first_diff(smooth(x, width_for(smfd_s, r)))));
}

}  // namespace

std::pair<Vec, Vec> naive_periodogram(const Vec& x, double rate) {
  const std::size_t n = x.size();
  Vec freqs, power;
  for (std::size_t k = 0; k <= n / 2; ++k) {
    double re = 0, im = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(k * t % n) /
                         static_cast<double>(n);
      re += x[t] * std::cos(ang);
      im += x[t] * std::sin(ang);
    }
    const bool single = k == 0 || (n % 2 == 0 && k == n / 2);
    freqs.push_back(static_cast<double>(k) * rate / static_cast<double>(n));
    power.push_back((single ? 1.0 : 2.0) * (re * re + im * im) / (rate * static_cast<double>(n)));
  }
  return {freqs, power};
}

namespace {

struct Spectrum {
  Vec f, p;
  double df;
};

double band(const Spectrum& s, double lo, double hi) {
  const double eps = 1e-9 * s.df;
  const bool to_nyq = std::abs(hi - s.f.back()) <= eps;
  double total = 0;
  for (std::size_t k = 0; k < s.f.size(); ++k)
    if (s.f[k] >= lo - eps && (s.f[k] < hi - eps || (to_nyq && k + 1 == s.f.size())))
      total += s.p[k] * s.df;
  return total;
}

double peak(const Spectrum& s, double lo, double hi) {
  const double eps = 1e-9 * s.df;
  double best = -1, at = 0;
  for (std::size_t k = 0; k < s.f.size(); ++k)
    if (s.f[k] >= lo - eps && s.f[k] < hi - eps && s.p[k] > best) {
      best = s.p[k];
      at = s.f[k];
    }
  return at;
}

double edge(const Spectrum& s, double frac) {
  double total = 0;
  for (std::size_t k = 1; k < s.p.size(); ++k) total += s.p[k];
  if (total <= 0) return 0;
  double cum = 0;
  for (std::size_t k = 1; k < s.p.size(); ++k) {
    cum += s.p[k];
    if (cum >= frac * total * (1.0 - 1e-12)) return s.f[k];
  }
  return s.f.back();
}

void freq_features(const std::string& sig, const OracleSignal& os, bool eda_bands, bool hrv,
                   std::map<std::string, double>& out) {
  auto [f, p] = naive_periodogram(os.x, os.rate);
  Spectrum s{f, p, os.rate / static_cast<double>(os.x.size())};
  auto put = [&](const char* name, double v) { out[sig + "." + name] = v; };
  if (hrv) {
    const double vlf = band(s, 0.003, 0.04), lf = band(s, 0.04, 0.15), hf = band(s, 0.15, 0.4);
    const double total = vlf + lf + hf;
    put("aVLF", vlf);
    put("aLF", lf);
    put("aHF", hf);
    put("aTotal", total);
    put("pVLF", total > 0 ? 100 * vlf / total : 0);
    put("pLF", total > 0 ? 100 * lf / total : 0);
    put("pHF", total > 0 ? 100 * hf / total : 0);
    put("nLF", lf + hf > 0 ? 100 * lf / (lf + hf) : 0);
    put("nHF", lf + hf > 0 ? 100 * hf / (lf + hf) : 0);
    put("LFHF", hf > 0 ? lf / hf : 0);
    put("peakVLF", vlf > 0 ? peak(s, 0.003, 0.04) : 0);
    put("peakLF", lf > 0 ? peak(s, 0.04, 0.15) : 0);
    put("peakHF", hf > 0 ? peak(s, 0.15, 0.4) : 0);
    return;
  }
  Vec nondc(p.begin() + 1, p.end());
  put("PSD_MEAN", mean(nondc));
  put("PSD_STD", pop_std(nondc));
  put("P25", edge(s, 0.25));
  put("P50", edge(s, 0.50));
  put("P75", edge(s, 0.75));
  if (eda_bands) {
    put("BP_0.1_0.2", band(s, 0.1, 0.2));
    put("BP_0.2_0.3", band(s, 0.2, 0.3));
    put("BP_0.3_0.4", band(s, 0.3, 0.4));
  }
}

}  // namespace

std::map<std::string, double> oracle_features(const OracleWindow& w, double hr_smooth_seconds,
                                              double eda_smooth_seconds) {
  std::map<std::string, double> out;
  for (const auto& [name, sig] : w) {
    const bool is_eda = name == "eda";
    time_features(name, sig, name == "hr" ? hr_smooth_seconds : 1.0, is_eda, eda_smooth_seconds,
                  out);
    const bool eda_family = name == "eda" || name == "scl" || name == "scr";
    freq_features(name, sig, eda_family, name == "hr", out);
  }
  return out;
}

}  // namespace wristmood::oracle
