#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "feature_oracle.hpp"
#include "wristmood/dsp.hpp"
#include "wristmood/error.hpp"

namespace wristmood::dsp {
namespace {

constexpr double kPi = std::numbers::pi;

double db(double g) { return 20.0 * std::log10(g); }

std::vector<double> sine(std::size_t n, double f, double rate, double amp = 1.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = amp * std::sin(2.0 * kPi * f * i / rate);
  return x;
}

double mean_square(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s / x.size();
}

double total_power(const Psd& p) {
  double s = 0.0;
  for (double v : p.power) s += v * p.df;
  return s;
}

// |H| from the analytic Butterworth magnitude of the prewarped prototype.
double analytic_lowpass_gain(int order, double fc, double f, double rate) {
  const double w = std::tan(kPi * f / rate) / std::tan(kPi * fc / rate);
  return 1.0 / std::sqrt(1.0 + std::pow(w, 2 * order));
}

TEST(Butterworth, LowpassCutoffAndDc) {
  const auto f = butter_lowpass(3, 1.5, 4.0);
  EXPECT_NEAR(f.gain(0.0), 1.0, 1e-12);
  EXPECT_NEAR(db(f.gain(1.5)), -3.0103, 0.5);
  EXPECT_NEAR(f.gain(1.5), 1.0 / std::sqrt(2.0), 1e-9);
  EXPECT_EQ(f.order(), 3);
  for (double hz : {0.2, 0.7, 1.0, 1.9})
    EXPECT_NEAR(f.gain(hz), analytic_lowpass_gain(3, 1.5, hz, 4.0), 1e-9) << hz;
}

TEST(Butterworth, BandpassCutoffsDcAndOrder) {
  const auto f = butter_bandpass(3, 0.2, 10.0, 32.0);
  EXPECT_EQ(f.order(), 6);
  EXPECT_EQ(f.sections.size(), 3u);
  EXPECT_NEAR(db(f.gain(0.2)), -3.0103, 0.5);
  EXPECT_NEAR(db(f.gain(10.0)), -3.0103, 0.5);
  EXPECT_LT(f.gain(0.0), 1e-12);
  EXPECT_LT(f.gain(16.0), 1e-9);
  EXPECT_NEAR(f.gain(1.0), 1.0, 0.01);
}

TEST(Butterworth, PolesInsideUnitCircle) {
  for (const auto& f : {butter_lowpass(3, 1.5, 4.0), butter_lowpass(2, 0.05, 4.0),
                        butter_bandpass(3, 0.2, 10.0, 32.0), butter_lowpass(8, 0.01, 4.0)})
    for (auto p : f.poles()) EXPECT_LT(std::abs(p), 1.0 - 1e-8);
}

TEST(Butterworth, RejectsBadDesigns) {
  EXPECT_THROW(butter_lowpass(3, 2.0, 4.0), Error);
  EXPECT_THROW(butter_lowpass(0, 1.0, 4.0), Error);
  EXPECT_THROW(butter_bandpass(3, 5.0, 1.0, 32.0), Error);
}

TEST(ZeroPhase, ConstantThroughLowpass) {
  const auto f = butter_lowpass(3, 1.5, 4.0);
  const std::vector<double> x(400, 2.5);
  for (double v : apply_zero_phase(f, x)) EXPECT_NEAR(v, 2.5, 1e-9);
}

TEST(ZeroPhase, ConstantThroughBandpass) {
  const auto f = butter_bandpass(3, 0.2, 10.0, 32.0);
  const std::vector<double> x(2000, 64.0);
  for (double v : apply_zero_phase(f, x)) EXPECT_LT(std::fabs(v), 1e-6 * 64.0);
}

TEST(ZeroPhase, SineAmplitudeMatchesSquaredGain) {
  const auto f = butter_bandpass(3, 0.2, 10.0, 32.0);
  const auto x = sine(512, 1.0, 32.0);
  const auto y = apply_zero_phase(f, x);
  const double expected = std::pow(f.gain(1.0), 2);
  double peak = 0.0;
  for (std::size_t i = 192; i < 320; ++i) peak = std::max(peak, std::fabs(y[i]));
  EXPECT_NEAR(peak, expected, 0.02);
  EXPECT_NEAR(peak, 1.0, 0.02);
  EXPECT_EQ(y.size(), x.size());
}

TEST(ZeroPhase, NoLagOnBandLimitedNoise) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<double> raw(4096);
  for (auto& v : raw) v = g(rng);
  const auto x = apply_zero_phase(butter_lowpass(4, 2.0, 32.0), raw);
  const auto y = apply_zero_phase(butter_bandpass(3, 0.2, 10.0, 32.0), x);
  int best_lag = 99;
  double best = -1e300;
  for (int lag = -20; lag <= 20; ++lag) {
    double s = 0.0;
    for (int i = 100; i < 4000; ++i) s += x[i] * y[i + lag];
    if (s > best) {
      best = s;
      best_lag = lag;
    }
  }
  EXPECT_EQ(best_lag, 0);
}

TEST(ZeroPhase, TooShort) {
  const auto f = butter_lowpass(3, 1.5, 4.0);
  EXPECT_THROW(apply_zero_phase(f, std::vector<double>(9, 1.0)), Error);
  EXPECT_NO_THROW(apply_zero_phase(f, std::vector<double>(10, 1.0)));
}

TEST(Periodogram, SineParseval) {
  const auto p = periodogram(sine(64, 1.0, 32.0), 32.0);
  EXPECT_EQ(p.freqs.size(), p.power.size());
  EXPECT_EQ(p.freqs.size(), 33u);
  EXPECT_NEAR(total_power(p), 0.5, 1e-6);
  EXPECT_NEAR(band_power(p, 0.9, 1.1).power, 0.5, 1e-6);
  EXPECT_NEAR(band_power(p, 2.0, 3.0).power, 0.0, 1e-12);
  EXPECT_NEAR(band_power(p, 0.0, p.nyquist()).power, 0.5, 1e-6);
}

TEST(Periodogram, ZeroAndConstant) {
  const auto z = periodogram(std::vector<double>(16, 0.0), 4.0);
  for (double v : z.power) EXPECT_EQ(v, 0.0);
  const auto c = periodogram(std::vector<double>(16, 3.0), 4.0);
  EXPECT_NEAR(c.power[0] * c.df, 9.0, 1e-9);
  for (std::size_t k = 1; k < c.power.size(); ++k) EXPECT_NEAR(c.power[k], 0.0, 1e-12);
  EXPECT_THROW(periodogram(std::vector<double>(7, 1.0), 4.0), Error);
}

TEST(Periodogram, MatchesNaiveDft) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (std::size_t n : {8u, 9u, 16u, 31u, 60u}) {
    std::vector<double> x(n);
    for (auto& v : x) v = u(rng);
    const auto p = periodogram(x, 4.0);
    const auto [f, pw] = oracle::naive_periodogram(x, 4.0);
    ASSERT_EQ(p.power.size(), pw.size());
    for (std::size_t k = 0; k < pw.size(); ++k) {
      EXPECT_NEAR(p.freqs[k], f[k], 1e-12);
      EXPECT_NEAR(p.power[k], pw[k], 1e-9 * (1.0 + std::fabs(pw[k])));
    }
  }
}

TEST(Periodogram, ParsevalOnRandomSignals) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> len(8, 600);
  std::normal_distribution<double> g(0.0, 3.0);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> x(len(rng));
    for (auto& v : x) v = g(rng) + 1.0;
    const auto p = periodogram(x, 4.0);
    EXPECT_NEAR(total_power(p), mean_square(x), 1e-6 * mean_square(x));
  }
}

TEST(BandPower, EmptyBandFlagged) {
  const auto p = periodogram(sine(60, 0.1, 1.0), 1.0);
  const auto b = band_power(p, 0.003, 0.01);
  EXPECT_TRUE(b.empty);
  EXPECT_EQ(b.power, 0.0);
}

TEST(SpectralEdge, Tones) {
  const auto one = periodogram(sine(64, 1.0, 32.0), 32.0);
  for (double fr : {0.25, 0.5, 0.75}) EXPECT_DOUBLE_EQ(spectral_edge(one, fr), 1.0);
  auto two = sine(64, 1.0, 32.0);
  const auto four = sine(64, 4.0, 32.0);
  for (std::size_t i = 0; i < two.size(); ++i) two[i] += four[i];
  const auto p = periodogram(two, 32.0);
  EXPECT_DOUBLE_EQ(spectral_edge(p, 0.25), 1.0);
  EXPECT_DOUBLE_EQ(spectral_edge(p, 0.75), 4.0);
  EXPECT_THROW(spectral_edge(periodogram(std::vector<double>(16, 2.0), 4.0), 0.5), Error);
}

TEST(SpectralEdge, FlatSpectrumAndMonotone) {
  std::vector<double> impulse(64, 0.0);
  impulse[0] = 1.0;
  const auto p = periodogram(impulse, 32.0);
  EXPECT_NEAR(spectral_edge(p, 0.5), p.nyquist() / 2.0, p.df);
  double prev = 0.0;
  for (double fr = 0.05; fr <= 1.0; fr += 0.05) {
    const double e = spectral_edge(p, fr);
    EXPECT_GE(e, prev);
    prev = e;
  }
}

TEST(MovingAverage, Examples) {
  const std::vector<double> x = {0, 4, 0};
  const auto y = moving_average(x, 3);
  EXPECT_DOUBLE_EQ(y[0], 2.0);
  EXPECT_DOUBLE_EQ(y[1], 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(y[2], 2.0);
  EXPECT_EQ(moving_average(x, 1), x);
  for (double v : moving_average(std::vector<double>(10, 7.0), 4)) EXPECT_DOUBLE_EQ(v, 7.0);
  EXPECT_THROW(moving_average(x, 4), Error);
}

TEST(LineFit, Examples) {
  std::vector<double> line(20);
  for (std::size_t i = 0; i < line.size(); ++i) line[i] = 2.0 * (i / 4.0) + 1.0;
  auto f = linfit(line, 4.0);
  EXPECT_NEAR(f.slope, 2.0, 1e-9);
  EXPECT_NEAR(f.intercept, 1.0, 1e-9);
  f = linfit(std::vector<double>(5, 3.0), 1.0);
  EXPECT_NEAR(f.slope, 0.0, 1e-12);
  EXPECT_NEAR(f.intercept, 3.0, 1e-12);
  f = linfit(std::vector<double>{0, 1, 0, 1}, 1.0);
  EXPECT_NEAR(f.slope, 0.2, 1e-12);
  EXPECT_NEAR(f.intercept, 0.2, 1e-12);
}

}  // namespace
}  // namespace wristmood::dsp
