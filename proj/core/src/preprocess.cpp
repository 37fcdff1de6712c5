#include "wristmood/preprocess.hpp"

#include <cmath>

#include "wristmood/error.hpp"

namespace wristmood {

std::vector<double> acc_norm(std::span<const double> x, std::span<const double> y,
                             std::span<const double> z) {
  if (x.size() != y.size() || x.size() != z.size())
    fail(ErrorCode::kDimensionMismatch, "ACC axes have different lengths");
  std::vector<double> n(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    n[i] = std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]);
  return n;
}

AccFiltered acc_preprocess(std::span<const double> x, std::span<const double> y,
                           std::span<const double> z, double rate_hz,
                           const PreprocessOptions& options) {
  const auto norm = acc_norm(x, y, z);
  const auto bp =
      dsp::butter_bandpass(options.acc_order, options.acc_low_hz, options.acc_high_hz, rate_hz);
  return {dsp::apply_zero_phase(bp, x), dsp::apply_zero_phase(bp, y),
          dsp::apply_zero_phase(bp, z), dsp::apply_zero_phase(bp, norm)};
}

TempCleaned temp_clean(std::span<const double> temp, double threshold_c) {
  TempCleaned out;
  out.samples.assign(temp.begin(), temp.end());
  if (out.samples.empty()) return out;
  double held = out.samples[0];
  for (std::size_t i = 1; i < out.samples.size(); ++i) {
    if (std::abs(out.samples[i] - held) > threshold_c) {
      out.samples[i] = held;
      ++out.discarded;
    } else {
      held = out.samples[i];
    }
  }
  return out;
}

HrNormalized hr_normalize(std::span<const double> hr, double rate_hz, double basal_seconds) {
  if (hr.empty()) fail(ErrorCode::kSignalTooShort, "empty HR series");
  const auto wanted = static_cast<std::size_t>(std::llround(basal_seconds * rate_hz));
  HrNormalized out;
  std::size_t count = wanted;
  if (wanted == 0 || wanted > hr.size()) {
    count = hr.size();
    out.short_basal = wanted > hr.size();
  }
  double basal = 0.0;
  for (std::size_t i = 0; i < count; ++i) basal += hr[i];
  basal /= static_cast<double>(count);
  if (!(basal > 0.0))
    fail(ErrorCode::kInvalidArgument, "basal HR mean must be positive, got " + std::to_string(basal));
  out.samples.resize(hr.size());
  for (std::size_t i = 0; i < hr.size(); ++i) out.samples[i] = hr[i] / basal;
  return out;
}

EdaComponents eda_decompose(std::span<const double> eda, double rate_hz,
                            const PreprocessOptions& options) {
  const auto lp = dsp::butter_lowpass(options.eda_order, options.eda_cutoff_hz, rate_hz);
  const auto tonic = dsp::butter_lowpass(options.scl_order, options.scl_cutoff_hz, rate_hz);
  EdaComponents out;
  out.eda_filt = dsp::apply_zero_phase(lp, eda);
  out.scl = dsp::apply_zero_phase(tonic, out.eda_filt);
  out.scr.resize(out.eda_filt.size());
  for (std::size_t i = 0; i < out.scr.size(); ++i) out.scr[i] = out.eda_filt[i] - out.scl[i];
  return out;
}

PreprocessedChannels preprocess(const SessionRecording& rec, const PreprocessOptions& options) {
  if (!rec.feature_extractable())
    fail(ErrorCode::kMissingChannel, "session '" + rec.session_id +
                                         "' lacks a channel required for features");
  PreprocessedChannels out;
  const auto& ax = rec.channel(ChannelKind::kAccX);
  const auto& ay = rec.channel(ChannelKind::kAccY);
  const auto& az = rec.channel(ChannelKind::kAccZ);
  if (ay.start_time != ax.start_time || az.start_time != ax.start_time ||
      ay.sample_rate != ax.sample_rate || az.sample_rate != ax.sample_rate)
    fail(ErrorCode::kDimensionMismatch, "ACC axes are not aligned");
  auto acc = acc_preprocess(ax.samples, ay.samples, az.samples, ax.sample_rate, options);
  auto wrap = [](const ChannelSeries& ch, std::vector<double> s) {
    return Signal{ch.start_time, ch.sample_rate, std::move(s)};
  };
  out.acc_x = wrap(ax, std::move(acc.x));
  out.acc_y = wrap(ax, std::move(acc.y));
  out.acc_z = wrap(ax, std::move(acc.z));
  out.acc_norm = wrap(ax, std::move(acc.norm));

  const auto& temp = rec.channel(ChannelKind::kTemp);
  auto tc = temp_clean(temp.samples, options.temp_jump_c);
  out.temp_discarded = tc.discarded;
  out.temp_clean = wrap(temp, std::move(tc.samples));

  const auto& hr = rec.channel(ChannelKind::kHr);
  auto hn = hr_normalize(hr.samples, hr.sample_rate, options.hr_basal_seconds);
  if (hn.short_basal)
    out.warnings.push_back("HR recording shorter than the basal span; whole series used as basal");
  out.hr_norm = wrap(hr, std::move(hn.samples));

  const auto& eda = rec.channel(ChannelKind::kEda);
  for (double v : eda.samples)
    if (v < 0.0) ++out.eda_negative;
  if (out.eda_negative > 0)
    out.warnings.push_back(std::to_string(out.eda_negative) + " negative EDA samples");
  auto parts = eda_decompose(eda.samples, eda.sample_rate, options);
  out.eda_filt = wrap(eda, std::move(parts.eda_filt));
  out.scl = wrap(eda, std::move(parts.scl));
  out.scr = wrap(eda, std::move(parts.scr));
  return out;
}

}  // namespace wristmood
