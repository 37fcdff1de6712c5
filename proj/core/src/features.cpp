#include "wristmood/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "parallel.hpp"
#include "wristmood/error.hpp"

namespace wristmood {

namespace {

std::size_t smoothing_width(double seconds, double rate) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(seconds * rate)));
}

double percentile(std::span<const double> x, double p) {
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double mean_abs_first_diff(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += std::abs(x[i] - x[i - 1]);
  return s / static_cast<double>(x.size() - 1);
}

}  // namespace

TimeDomainStats::TimeDomainStats(std::span<const double> x, double rate_hz,
                                 std::size_t smooth_width)
    : x_(x), rate_(rate_hz), smooth_width_(smooth_width) {
  const std::size_t n = x.size();
  if (n < 2) fail(ErrorCode::kSignalTooShort, "time-domain statistics need at least 2 samples");
  const double nn = static_cast<double>(n);
  min_ = max_ = x[0];
  for (double v : x) {
    sum_ += v;
    sumsq_ += v * v;
    min_ = std::min(min_, v);
    max_ = std::max(max_, v);
  }
  mean_ = sum_ / nn;
  double m2 = 0.0;
  for (double v : x) {
    const double d = v - mean_;
    const double d2 = d * d;
    m2 += d2;
    m3_ += d2 * d;
    m4_ += d2 * d2;
    mad_ += std::abs(d);
  }
  var_ = m2 / nn;
  m3_ /= nn;
  m4_ /= nn;
  mad_ /= nn;
  std_ = std::sqrt(var_);
  flat_ = std_ <= kDegenerateStdRel * std::max(1.0, std::abs(mean_));

  const double n1 = nn - 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double d = x[i] - x[i - 1];
    d1_mean_ += d;
    d1_abs_ += std::abs(d);
    arc_ += std::sqrt(1.0 + d * d);
  }
  d1_mean_ /= n1;
  d1_abs_ /= n1;
  for (std::size_t i = 1; i < n; ++i) {
    const double d = x[i] - x[i - 1] - d1_mean_;
    d1_std_ += d * d;
  }
  d1_std_ = std::sqrt(d1_std_ / n1);

  has_d2_ = n >= 3;
  if (has_d2_) {
    const double n2 = nn - 2.0;
    for (std::size_t i = 2; i < n; ++i) {
      const double d = x[i] - 2.0 * x[i - 1] + x[i - 2];
      d2_mean_ += d;
      d2_abs_ += std::abs(d);
    }
    d2_mean_ /= n2;
    d2_abs_ /= n2;
    for (std::size_t i = 2; i < n; ++i) {
      const double d = x[i] - 2.0 * x[i - 1] + x[i - 2] - d2_mean_;
      d2_std_ += d * d;
    }
    d2_std_ = std::sqrt(d2_std_ / n2);
  }
}

StatValue TimeDomainStats::get(Stat stat) const {
  const double nn = static_cast<double>(x_.size());
  const double integral = sum_ / rate_;
  auto degenerate = [] { return StatValue{0.0, true}; };
  auto needs_d2 = [&](double v) { return has_d2_ ? StatValue{v, false} : degenerate(); };
  switch (stat) {
    case Stat::kMax: return {max_};
    case Stat::kMin: return {min_};
    case Stat::kMean: return {mean_};
    case Stat::kAmp:
    case Stat::kDr: return {max_ - min_};
    case Stat::kVar: return {var_};
    case Stat::kStd: return {std_};
    case Stat::kRms:
    case Stat::kNrms: return {std::sqrt(sumsq_ / nn)};
    case Stat::kP90: return {percentile(x_, 0.90)};
    case Stat::kMad: return {mad_};
    case Stat::kNorm: return {std::sqrt(sumsq_)};
    case Stat::kMavfd: return {d1_abs_};
    case Stat::kMavfdn: return flat_ ? degenerate() : StatValue{d1_abs_ / std_};
    case Stat::kMavsd: return needs_d2(d2_abs_);
    case Stat::kMavsdn: return flat_ ? degenerate() : needs_d2(d2_abs_ / std_);
    case Stat::kFdm: return {d1_mean_ * rate_};
    case Stat::kFdstd: return {d1_std_ * rate_};
    case Stat::kSdm: return needs_d2(d2_mean_ * rate_ * rate_);
    case Stat::kSdstd: return needs_d2(d2_std_ * rate_ * rate_);
    case Stat::kAl: return {arc_};
    case Stat::kIntegral: return {integral};
    case Stat::kNap: return {sumsq_ / nn};
    case Stat::kApr: return {integral / arc_};
    case Stat::kEpr: return {sumsq_ / arc_};
    case Stat::kCm: return {m3_};
    case Stat::kSkew: return flat_ ? degenerate() : StatValue{m3_ / (var_ * std_)};
    case Stat::kKurt: return flat_ ? degenerate() : StatValue{m4_ / (var_ * var_)};
    case Stat::kSrl: return {dsp::linfit(x_, rate_).slope};
    case Stat::kIrl: return {dsp::linfit(x_, rate_).intercept};
    case Stat::kSm: {
      const auto s = dsp::moving_average(x_, smooth_width_);
      double acc = 0.0;
      for (double v : s) acc += v;
      return {acc / nn};
    }
    case Stat::kMfd: return {d1_mean_};
    case Stat::kSmfd: return {mean_abs_first_diff(dsp::moving_average(x_, smooth_width_))};
    default: break;
  }
  fail(ErrorCode::kInvalidArgument, "not a time-domain statistic: " + std::string(to_string(stat)));
}

StatValue time_stat(Stat stat, std::span<const double> samples, double rate_hz,
                    std::size_t smooth_width) {
  return TimeDomainStats(samples, rate_hz, smooth_width).get(stat);
}

namespace {

// Conventional HRV bands (Hz).
constexpr double kVlfLo = 0.003, kVlfHi = 0.04;
constexpr double kLfLo = 0.04, kLfHi = 0.15;
constexpr double kHfLo = 0.15, kHfHi = 0.4;

}  // namespace

FrequencyDomainStats::FrequencyDomainStats(std::span<const double> samples, double rate_hz)
    : psd_(dsp::periodogram(samples, rate_hz)) {
  const std::size_t bins = psd_.power.size();
  double s = 0.0;
  for (std::size_t k = 1; k < bins; ++k) s += psd_.power[k];
  psd_mean_ = s / static_cast<double>(bins - 1);
  double v = 0.0;
  for (std::size_t k = 1; k < bins; ++k) v += (psd_.power[k] - psd_mean_) * (psd_.power[k] - psd_mean_);
  psd_std_ = std::sqrt(v / static_cast<double>(bins - 1));

  const auto vlf = dsp::band_power(psd_, kVlfLo, kVlfHi);
  const auto lf = dsp::band_power(psd_, kLfLo, kLfHi);
  const auto hf = dsp::band_power(psd_, kHfLo, kHfHi);
  vlf_ = vlf.power;
  lf_ = lf.power;
  hf_ = hf.power;
  vlf_empty_ = vlf.empty;
  lf_empty_ = lf.empty;
  hf_empty_ = hf.empty;
}

StatValue FrequencyDomainStats::edge(double fraction) const {
  try {
    return {dsp::spectral_edge(psd_, fraction)};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateSpectrum) throw;
    return {0.0, true};
  }
}

StatValue FrequencyDomainStats::peak(double lo, double hi) const {
  const double eps = 1e-9 * psd_.df;
  double best = -1.0, at = 0.0;
  for (std::size_t k = 0; k < psd_.freqs.size(); ++k) {
    const double f = psd_.freqs[k];
    if (f >= lo - eps && f < hi - eps && psd_.power[k] > best) {
      best = psd_.power[k];
      at = f;
    }
  }
  return {at};
}

StatValue FrequencyDomainStats::get(Stat stat) const {
  auto band = [&](double lo, double hi) {
    const auto bp = dsp::band_power(psd_, lo, hi);
    return StatValue{bp.power, bp.empty};
  };
  auto ratio = [](double num, double den, double scale) {
    return den > 0.0 ? StatValue{scale * num / den} : StatValue{0.0, true};
  };
  const double total = vlf_ + lf_ + hf_;
  switch (stat) {
    case Stat::kPsdMean: return {psd_mean_};
    case Stat::kPsdStd: return {psd_std_};
    case Stat::kP25: return edge(0.25);
    case Stat::kP50: return edge(0.50);
    case Stat::kP75: return edge(0.75);
    case Stat::kBp01to02: return band(0.1, 0.2);
    case Stat::kBp02to03: return band(0.2, 0.3);
    case Stat::kBp03to04: return band(0.3, 0.4);
    case Stat::kAvlf: return {vlf_, vlf_empty_};
    case Stat::kAlf: return {lf_, lf_empty_};
    case Stat::kAhf: return {hf_, hf_empty_};
    case Stat::kAtotal: return {total};
    case Stat::kPvlf: return ratio(vlf_, total, 100.0);
    case Stat::kPlf: return ratio(lf_, total, 100.0);
    case Stat::kPhf: return ratio(hf_, total, 100.0);
    case Stat::kNlf: return ratio(lf_, lf_ + hf_, 100.0);
    case Stat::kNhf: return ratio(hf_, lf_ + hf_, 100.0);
    case Stat::kLfhf: return ratio(lf_, hf_, 1.0);
    case Stat::kPeakVlf: return vlf_ > 0.0 ? peak(kVlfLo, kVlfHi) : StatValue{0.0, true};
    case Stat::kPeakLf: return lf_ > 0.0 ? peak(kLfLo, kLfHi) : StatValue{0.0, true};
    case Stat::kPeakHf: return hf_ > 0.0 ? peak(kHfLo, kHfHi) : StatValue{0.0, true};
    default: break;
  }
  fail(ErrorCode::kInvalidArgument,
       "not a frequency-domain statistic: " + std::string(to_string(stat)));
}

std::vector<std::pair<Stat, StatValue>> freq_stats(std::span<const double> samples, double rate_hz,
                                                   ChannelGroup group) {
  SignalId representative = SignalId::kAccX;
  switch (group) {
    case ChannelGroup::kAcc: representative = SignalId::kAccX; break;
    case ChannelGroup::kTemp: representative = SignalId::kTemp; break;
    case ChannelGroup::kHr: representative = SignalId::kHr; break;
    case ChannelGroup::kEda: representative = SignalId::kScl; break;
  }
  const FrequencyDomainStats fd(samples, rate_hz);
  std::vector<std::pair<Stat, StatValue>> out;
  for (Stat s : FeatureRegistry::instance().stats_for(representative, Domain::kFrequency))
    out.emplace_back(s, fd.get(s));
  return out;
}

FeatureVector compute_features(const WindowSignals& window, const FeatureOptions& options) {
  const auto& registry = FeatureRegistry::instance();
  std::map<SignalId, TimeDomainStats> time;
  std::map<SignalId, FrequencyDomainStats> freq;
  FeatureVector out;
  out.values.reserve(registry.size());
  for (const auto& info : registry.features()) {
    const SignalView& view = window[info.signal];
    StatValue v;
    if (info.domain == Domain::kTime) {
      auto it = time.find(info.signal);
      if (it == time.end()) {
        double smooth_s = 1.0;
        if (info.signal == SignalId::kHr) smooth_s = options.hr_smooth_seconds;
        if (info.signal == SignalId::kEda) smooth_s = options.eda_smooth_seconds;
        it = time.emplace(info.signal, TimeDomainStats(view.samples, view.rate_hz,
                                                       smoothing_width(smooth_s, view.rate_hz)))
                 .first;
      }
      v = it->second.get(info.stat);
    } else {
      auto it = freq.find(info.signal);
      if (it == freq.end())
        it = freq.emplace(info.signal, FrequencyDomainStats(view.samples, view.rate_hz)).first;
      v = it->second.get(info.stat);
    }
    if (v.degenerate) {
      v.value = 0.0;
      out.degenerate.push_back(info.index);
    }
    out.values.push_back(v.value);
  }
  return out;
}

std::vector<std::pair<double, double>> iter_windows(double span_start, double span_end,
                                                    double window_seconds, double overlap) {
  if (!(window_seconds > 0.0)) fail(ErrorCode::kInvalidArgument, "window length must be positive");
  if (!(overlap >= 0.0 && overlap < 1.0))
    fail(ErrorCode::kInvalidArgument, "overlap must lie in [0, 1)");
  const double hop = window_seconds * (1.0 - overlap);
  const double eps = 1e-9 * std::max(1.0, window_seconds);
  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 0;; ++k) {
    const double start = span_start + static_cast<double>(k) * hop;
    if (start + window_seconds > span_end + eps) break;
    out.emplace_back(start, start + window_seconds);
  }
  return out;
}

namespace {

std::array<const Signal*, 9> signal_table(const PreprocessedChannels& c) {
  return {&c.acc_x, &c.acc_y, &c.acc_z, &c.acc_norm, &c.temp_clean,
          &c.hr_norm, &c.eda_filt, &c.scl, &c.scr};
}

}  // namespace

std::pair<double, double> coverage(const PreprocessedChannels& channels) {
  double start = -std::numeric_limits<double>::infinity();
  double end = std::numeric_limits<double>::infinity();
  for (const Signal* s : signal_table(channels)) {
    start = std::max(start, s->start_time);
    end = std::min(end, s->end_time());
  }
  return {start, end};
}

FeatureWindow extract(const PreprocessedChannels& channels, double start,
                      const FeatureOptions& options) {
  FeatureWindow fw;
  fw.start = start;
  fw.end = start + options.window_seconds;
  fw.channel_valid.fill(true);
  WindowSignals ws;
  const auto table = signal_table(channels);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const Signal& s = *table[i];
    const auto first = std::llround((start - s.start_time) * s.sample_rate);
    const auto count = std::llround(options.window_seconds * s.sample_rate);
    const auto group = static_cast<std::size_t>(group_of(static_cast<SignalId>(i)));
    if (first < 0 || count < 2 ||
        first + count > static_cast<long long>(s.samples.size())) {
      fw.channel_valid[group] = false;
      continue;
    }
    ws.signals[i] = SignalView{
        std::span<const double>(s.samples).subspan(static_cast<std::size_t>(first),
                                                   static_cast<std::size_t>(count)),
        s.sample_rate};
  }
  for (bool ok : fw.channel_valid)
    if (!ok) return fw;
  auto fv = compute_features(ws, options);
  fw.values = std::move(fv.values);
  fw.degenerate = std::move(fv.degenerate);
  return fw;
}

std::vector<FeatureWindow> extract_all(const PreprocessedChannels& channels,
                                       const FeatureOptions& options) {
  const auto [begin, end] = coverage(channels);
  const auto bounds = iter_windows(begin, end, options.window_seconds, options.overlap);
  std::vector<FeatureWindow> out(bounds.size());
  detail::parallel_for(bounds.size(),
                       [&](std::size_t i) { out[i] = extract(channels, bounds[i].first, options); });
  return out;
}

}  // namespace wristmood
