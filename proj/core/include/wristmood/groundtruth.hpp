#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wristmood/features.hpp"
#include "wristmood/ingest.hpp"

namespace wristmood {

/// Circumplex octants, counter-clockwise from the positive happiness axis,
/// plus the neutral centre.
enum class MoodLabel {
  kPleasure,
  kExcitement,
  kArousal,
  kDistress,
  kMisery,
  kDepression,
  kSleepiness,
  kContentment,
  kNeutral,
};

inline constexpr std::size_t kMoodCount = 9;

std::string_view to_string(MoodLabel mood);
std::optional<MoodLabel> mood_from_string(std::string_view name);

/// Octant of the (happiness - 2, activeness - 2) offset; the centre maps to
/// Neutral. Throws kLikertOutOfRange outside 0..4.
MoodLabel mood_from_likert(int happiness, int activeness);

/// The diametrically opposite octant (Neutral maps to itself).
MoodLabel opposite(MoodLabel mood);

/// An EMA answer extended over [left, right) in unix seconds.
struct GroundTruthInterval {
  double left = 0.0;
  double right = 0.0;
  MoodLabel mood = MoodLabel::kNeutral;
  int happiness = 2;
  int activeness = 2;
  std::int64_t source_ema = 0;  // answered_at of the EMA

  friend bool operator==(const GroundTruthInterval&, const GroundTruthInterval&) = default;
};

/// Centres a window of window_minutes on each answer, clips it to the
/// recording span and splits overlapping neighbours at the midpoint of their
/// answer times. Output is sorted and pairwise disjoint; empty intervals are
/// omitted. Entries must be sorted by answered_at.
std::vector<GroundTruthInterval> extend_emas(std::span<const EmaEntry> day_entries,
                                             double window_minutes, double span_start,
                                             double span_end);

struct LabeledExample {
  FeatureWindow features;
  MoodLabel mood = MoodLabel::kNeutral;
  int happiness = 2;
  int activeness = 2;
  std::int64_t source_ema = 0;
  std::string day;  // ISO date of the recording the window came from
};

/// Labels each valid window by the interval containing its midpoint
/// (half-open); windows outside every interval are dropped.
std::vector<LabeledExample> label_windows(std::span<const FeatureWindow> windows,
                                          std::span<const GroundTruthInterval> intervals,
                                          const std::string& day = {});

struct RareClassResult {
  std::vector<LabeledExample> kept;
  std::vector<MoodLabel> dropped;
  std::map<MoodLabel, std::size_t> counts;  // before filtering
};

/// Single pass: removes every mood whose share of the examples is strictly
/// below min_fraction. Throws kDegenerateDataset if nothing survives.
RareClassResult filter_rare_classes(std::vector<LabeledExample> examples,
                                    double min_fraction = 0.10);

}  // namespace wristmood
