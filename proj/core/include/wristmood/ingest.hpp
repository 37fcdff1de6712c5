#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wristmood/error.hpp"
#include "wristmood/timezone.hpp"

namespace wristmood {

enum class ChannelKind { kAccX, kAccY, kAccZ, kTemp, kEda, kHr, kBvp };

std::string_view to_string(ChannelKind kind);

/// One uniformly sampled sensor channel. Sample i sits at
/// start_time + i / sample_rate (unix seconds).
///
/// Units: ACC raw 1/64 g, Temp degC, EDA uS, HR bpm, BVP dimensionless.
struct ChannelSeries {
  ChannelKind kind = ChannelKind::kTemp;
  double start_time = 0.0;
  double sample_rate = 1.0;
  std::vector<double> samples;

  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
  double end_time() const { return start_time + duration(); }
};

struct IbiEntry {
  double offset_seconds = 0.0;
  double duration_seconds = 0.0;
};

/// One wristband session. Channels keep their own start times since the
/// device begins HR output later than the raw sensors.
struct SessionRecording {
  std::string session_id;
  std::map<ChannelKind, ChannelSeries> channels;
  std::optional<double> ibi_start;
  std::vector<IbiEntry> ibi;
  std::vector<std::string> warnings;

  bool has(ChannelKind kind) const { return channels.contains(kind); }
  const ChannelSeries& channel(ChannelKind kind) const;
  double earliest_start() const;
  double latest_end() const;
  Date day(const TimeZone& tz) const;
  /// True when AccX/Y/Z, Temp, Eda and Hr are all present.
  bool feature_extractable() const;
};

/// One happiness/activeness answer on the 0..4 Likert scale.
struct EmaEntry {
  std::int64_t scheduled_at = 0;
  std::int64_t answered_at = 0;
  int happiness = 0;
  int activeness = 0;

  friend bool operator==(const EmaEntry&, const EmaEntry&) = default;
};

inline constexpr int kLikertMin = 0;
inline constexpr int kLikertMax = 4;

void validate_likert(int happiness, int activeness);

SessionRecording parse_session(const std::filesystem::path& dir);

/// Writes the directory format read by parse_session. Values use the
/// shortest round-trip representation so re-parsing is exact.
void write_session(const std::filesystem::path& dir, const SessionRecording& recording);

/// Parses one EMA record (a JSON object). Throws kMissingField,
/// kLikertOutOfRange or kInvalidArgument.
EmaEntry parse_ema_record(std::string_view line);
std::string format_ema_record(const EmaEntry& entry);

/// Reads a newline-delimited EMA log, sorted by answered_at. Duplicate
/// answered_at values are rejected.
std::vector<EmaEntry> parse_ema_log(const std::filesystem::path& path);
void write_ema_log(const std::filesystem::path& path, const std::vector<EmaEntry>& entries);

struct DayBundle {
  Date day;
  SessionRecording recording;
  std::vector<EmaEntry> emas;
};

struct DaySplit {
  std::vector<DayBundle> bundles;  // sorted by day
  std::vector<EmaEntry> orphans;
};

/// Pairs each recording with the EMAs answered on its local calendar day.
DaySplit split_days(std::vector<EmaEntry> entries, std::vector<SessionRecording> recordings,
                    const TimeZone& tz = TimeZone::utc());

}  // namespace wristmood
