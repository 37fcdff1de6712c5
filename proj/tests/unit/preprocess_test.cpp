#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "wristmood/preprocess.hpp"

namespace wristmood {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Acc, NormAndDcRejection) {
  const std::vector<double> x(3, 3.0), y(3, 4.0), z(3, 0.0);
  for (double v : acc_norm(x, y, z)) EXPECT_DOUBLE_EQ(v, 5.0);

  const std::size_t n = 32 * 60;
  const std::vector<double> gx(n, 0.0), gy(n, 0.0), gz(n, 64.0);
  EXPECT_DOUBLE_EQ(acc_norm(gx, gy, gz)[0], 64.0);
  const auto f = acc_preprocess(gx, gy, gz, 32.0);
  for (const auto* s : {&f.x, &f.y, &f.z, &f.norm})
    for (double v : *s) EXPECT_LT(std::fabs(v), 1e-6 * 64.0);
}

TEST(Acc, ShakeSurvivesInNorm) {
  const std::size_t n = 32 * 60;
  std::vector<double> x(n), y(n, 0.0), z(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) x[i] = 10.0 + 2.0 * std::sin(2.0 * kPi * i / 32.0);
  const auto f = acc_preprocess(x, y, z, 32.0);
  double peak = 0.0;
  for (std::size_t i = n / 3; i < 2 * n / 3; ++i) peak = std::max(peak, std::fabs(f.norm[i]));
  const auto bp = dsp::butter_bandpass(3, 0.2, 10.0, 32.0);
  EXPECT_NEAR(peak, 2.0 * std::pow(bp.gain(1.0), 2), 0.02 * 2.0);
}

TEST(Temp, SampleAndHold) {
  auto r = temp_clean(std::vector<double>{30.0, 30.5, 33.0, 30.6});
  EXPECT_EQ(r.samples, (std::vector<double>{30.0, 30.5, 30.5, 30.6}));
  EXPECT_EQ(r.discarded, 1u);
  r = temp_clean(std::vector<double>{20, 23, 26});
  EXPECT_EQ(r.samples, (std::vector<double>{20, 20, 20}));
  EXPECT_EQ(r.discarded, 2u);
  std::vector<double> ramp(50);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 30.0 + 0.1 * i;
  r = temp_clean(ramp);
  EXPECT_EQ(r.samples, ramp);
  EXPECT_EQ(r.discarded, 0u);
}

TEST(Hr, RatioToBasal) {
  std::vector<double> hr(900, 60.0);
  hr[700] = 72.0;
  auto r = hr_normalize(hr, 1.0);
  EXPECT_NEAR(r.samples[700], 1.2, 1e-12);
  EXPECT_FALSE(r.short_basal);
  double basal = 0.0;
  for (std::size_t i = 0; i < 600; ++i) basal += r.samples[i];
  EXPECT_NEAR(basal / 600.0, 1.0, 1e-9);

  for (double v : hr_normalize(std::vector<double>(1000, 80.0), 1.0).samples) EXPECT_DOUBLE_EQ(v, 1.0);

  std::vector<double> short_hr(300);
  for (std::size_t i = 0; i < short_hr.size(); ++i) short_hr[i] = 60.0 + (i % 7);
  r = hr_normalize(short_hr, 1.0);
  EXPECT_TRUE(r.short_basal);
  double m = 0.0;
  for (double v : r.samples) m += v;
  EXPECT_NEAR(m / r.samples.size(), 1.0, 1e-9);
  EXPECT_THROW(hr_normalize(std::vector<double>(10, 0.0), 1.0), Error);
}

TEST(Eda, ConstantDecomposition) {
  const auto c = eda_decompose(std::vector<double>(800, 2.0), 4.0);
  for (std::size_t i = 0; i < 800; ++i) {
    EXPECT_NEAR(c.eda_filt[i], 2.0, 1e-9);
    EXPECT_NEAR(c.scl[i], 2.0, 1e-9);
    EXPECT_NEAR(c.scr[i], 0.0, 1e-9);
  }
}

TEST(Eda, ExactSplitAndBands) {
  const std::size_t n = 4 * 1200;
  std::vector<double> eda(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = i / 4.0;
    eda[i] = 2.0 + 0.001 * t + 0.2 * std::sin(2.0 * kPi * 0.3 * t);
  }
  const auto c = eda_decompose(eda, 4.0);
  for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(c.scl[i] + c.scr[i], c.eda_filt[i]);

  // The 0.3 Hz component sits in scr and is attenuated by more than 20 dB in scl.
  double scr_amp = 0.0, scl_osc = 0.0;
  for (std::size_t i = n / 3; i < 2 * n / 3; ++i) {
    scr_amp = std::max(scr_amp, std::fabs(c.scr[i]));
    const double t = i / 4.0;
    scl_osc = std::max(scl_osc, std::fabs(c.scl[i] - (2.0 + 0.001 * t)));
  }
  EXPECT_NEAR(scr_amp, 0.2, 0.02);
  EXPECT_LT(scl_osc, 0.2 * 0.1);
}

TEST(Eda, SlowRampStaysInScl) {
  const std::size_t n = 4 * 1200;
  std::vector<double> eda(n);
  for (std::size_t i = 0; i < n; ++i) eda[i] = 1.0 + 0.001 * (i / 4.0);
  const auto c = eda_decompose(eda, 4.0);
  const double range = eda.back() - eda.front();
  for (std::size_t i = n / 4; i < 3 * n / 4; ++i) EXPECT_LT(std::fabs(c.scr[i]), 0.01 * range);
}

TEST(Preprocess, PreservesLengthAndRate) {
  SessionRecording rec;
  const double t0 = 1554192000.0;
  const std::size_t secs = 1200;
  rec.channels[ChannelKind::kAccX] = {ChannelKind::kAccX, t0, 32.0, std::vector<double>(32 * secs, 1.0)};
  rec.channels[ChannelKind::kAccY] = {ChannelKind::kAccY, t0, 32.0, std::vector<double>(32 * secs, 2.0)};
  rec.channels[ChannelKind::kAccZ] = {ChannelKind::kAccZ, t0, 32.0, std::vector<double>(32 * secs, 64.0)};
  rec.channels[ChannelKind::kTemp] = {ChannelKind::kTemp, t0, 4.0, std::vector<double>(4 * secs, 33.0)};
  rec.channels[ChannelKind::kEda] = {ChannelKind::kEda, t0, 4.0, std::vector<double>(4 * secs, 1.5)};
  rec.channels[ChannelKind::kHr] = {ChannelKind::kHr, t0 + 10, 1.0, std::vector<double>(secs - 10, 70.0)};
  const auto p = preprocess(rec);
  EXPECT_EQ(p.acc_norm.samples.size(), 32 * secs);
  EXPECT_EQ(p.acc_norm.sample_rate, 32.0);
  EXPECT_EQ(p.temp_clean.samples.size(), 4 * secs);
  EXPECT_EQ(p.hr_norm.samples.size(), secs - 10);
  EXPECT_EQ(p.hr_norm.start_time, t0 + 10);
  EXPECT_EQ(p.scr.samples.size(), 4 * secs);
  EXPECT_EQ(p.eda_negative, 0u);
}

}  // namespace
}  // namespace wristmood
