#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wristmood/preprocess.hpp"

namespace wristmood {

inline constexpr std::size_t kFeatureCount = 203;

enum class ChannelGroup { kAcc, kTemp, kHr, kEda };
enum class Domain { kTime, kFrequency };

std::string_view to_string(ChannelGroup group);

/// Scalar statistics computed over one window of one signal.
enum class Stat {
  // time domain
  kMax, kMin, kMean, kAmp, kDr, kVar, kStd, kRms, kP90, kMad, kNorm,
  kMavfd, kMavfdn, kMavsd, kMavsdn, kFdm, kFdstd, kSdm, kSdstd,
  kAl, kIntegral, kNap, kNrms, kApr, kEpr, kCm, kSkew, kKurt,
  kSrl, kIrl, kSm, kMfd, kSmfd,
  // generic frequency domain
  kPsdMean, kPsdStd, kP25, kP50, kP75, kBp01to02, kBp02to03, kBp03to04,
  // heart-rate variability bands
  kAvlf, kAlf, kAhf, kAtotal, kPvlf, kPlf, kPhf, kNlf, kNhf, kLfhf,
  kPeakVlf, kPeakLf, kPeakHf,
};

std::string_view to_string(Stat stat);
Domain domain_of(Stat stat);

/// Signals a feature can be computed on, in registry order.
enum class SignalId { kAccX, kAccY, kAccZ, kAccNorm, kTemp, kHr, kEda, kScl, kScr };

std::string_view to_string(SignalId signal);
ChannelGroup group_of(SignalId signal);

struct FeatureInfo {
  std::size_t index = 0;
  ChannelGroup group = ChannelGroup::kAcc;
  SignalId signal = SignalId::kAccX;
  Stat stat = Stat::kMax;
  Domain domain = Domain::kTime;
  std::string name;  // "<signal>.<STAT>", e.g. "acc_x.MAX"
};

/// The fixed 203-entry feature layout:
///   acc_x, acc_y, acc_z, acc_norm: 13 time + 5 frequency each (72)
///   temp: 8 time + 5 frequency (13)
///   hr:   14 time + 13 frequency (27)
///   eda 23 time, scl 22, scr 22, then 8 frequency each (91)
class FeatureRegistry {
 public:
  static const FeatureRegistry& instance();

  std::span<const FeatureInfo> features() const { return features_; }
  std::size_t size() const { return features_.size(); }
  std::size_t group_size(ChannelGroup group) const;
  std::vector<std::string> names() const;
  /// Stats for one signal and domain, in registry order.
  std::vector<Stat> stats_for(SignalId signal, Domain domain) const;

 private:
  FeatureRegistry();
  std::vector<FeatureInfo> features_;
};

struct FeatureOptions {
  double window_seconds = 60.0;
  double overlap = 0.10;
  double hr_smooth_seconds = 5.0;
  double eda_smooth_seconds = 1.0;
};

struct StatValue {
  double value = 0.0;
  bool degenerate = false;
};

/// Standard deviation at or below this fraction of max(1, |mean|) is
/// treated as zero by the normalised and standardised statistics.
inline constexpr double kDegenerateStdRel = 1e-12;

/// Precomputed summaries of one window, answering any time-domain Stat.
/// Population (1/N) moments; percentiles by linear interpolation;
/// kurtosis is non-excess.
class TimeDomainStats {
 public:
  TimeDomainStats(std::span<const double> samples, double rate_hz, std::size_t smooth_width = 1);
  StatValue get(Stat stat) const;

 private:
  std::span<const double> x_;
  double rate_;
  std::size_t smooth_width_;
  double mean_ = 0, min_ = 0, max_ = 0, var_ = 0, std_ = 0, sumsq_ = 0, sum_ = 0;
  double mad_ = 0, m3_ = 0, m4_ = 0;
  double d1_mean_ = 0, d1_abs_ = 0, d1_std_ = 0, arc_ = 0;
  double d2_mean_ = 0, d2_abs_ = 0, d2_std_ = 0;
  bool has_d2_ = false;
  bool flat_ = false;
};

/// Convenience wrapper building TimeDomainStats for a single statistic.
StatValue time_stat(Stat stat, std::span<const double> samples, double rate_hz,
                    std::size_t smooth_width = 1);

/// Periodogram-based statistics for one window. DC is excluded from the
/// spectrum mean/STD and from the spectral edges (P25/P50/P75).
class FrequencyDomainStats {
 public:
  FrequencyDomainStats(std::span<const double> samples, double rate_hz);
  StatValue get(Stat stat) const;
  const dsp::Psd& psd() const { return psd_; }

 private:
  StatValue edge(double fraction) const;
  StatValue peak(double lo, double hi) const;
  dsp::Psd psd_;
  double psd_mean_ = 0, psd_std_ = 0;
  double vlf_ = 0, lf_ = 0, hf_ = 0;
  bool vlf_empty_ = false, lf_empty_ = false, hf_empty_ = false;
};

/// Frequency statistics for a channel group, in registry order.
std::vector<std::pair<Stat, StatValue>> freq_stats(std::span<const double> samples, double rate_hz,
                                                   ChannelGroup group);

struct SignalView {
  std::span<const double> samples;
  double rate_hz = 1.0;
};

/// The nine conditioned signals restricted to one window.
struct WindowSignals {
  std::array<SignalView, 9> signals;  // indexed by SignalId

  SignalView& operator[](SignalId id) { return signals[static_cast<std::size_t>(id)]; }
  const SignalView& operator[](SignalId id) const { return signals[static_cast<std::size_t>(id)]; }
};

struct FeatureVector {
  std::vector<double> values;          // kFeatureCount entries
  std::vector<std::size_t> degenerate; // indices emitted as 0 because undefined
};

FeatureVector compute_features(const WindowSignals& window, const FeatureOptions& options = {});

/// A window's feature vector and time bounds [start, end).
struct FeatureWindow {
  double start = 0.0;
  double end = 0.0;
  std::vector<double> values;
  std::vector<std::size_t> degenerate;
  std::array<bool, 4> channel_valid{};  // indexed by ChannelGroup

  bool valid() const {
    for (bool v : channel_valid)
      if (!v) return false;
    return values.size() == kFeatureCount;
  }
  double midpoint() const { return 0.5 * (start + end); }
};

/// Window bounds over [span_start, span_end): hop = window * (1 - overlap),
/// start_k = span_start + k * hop while start_k + window <= span_end.
std::vector<std::pair<double, double>> iter_windows(double span_start, double span_end,
                                                    double window_seconds = 60.0,
                                                    double overlap = 0.10);

/// Time span covered by every conditioned signal.
std::pair<double, double> coverage(const PreprocessedChannels& channels);

/// Slices every signal to [start, start + window) and computes the features.
/// A signal that does not fully cover the window marks its group invalid
/// and leaves values empty.
FeatureWindow extract(const PreprocessedChannels& channels, double start,
                      const FeatureOptions& options = {});

/// All windows over the common coverage, sorted by start. Invalid windows
/// are kept (flagged) so callers can count them.
std::vector<FeatureWindow> extract_all(const PreprocessedChannels& channels,
                                       const FeatureOptions& options = {});

}  // namespace wristmood
