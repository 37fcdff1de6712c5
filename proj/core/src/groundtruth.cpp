#include "wristmood/groundtruth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wristmood/error.hpp"

namespace wristmood {

std::string_view to_string(MoodLabel mood) {
  switch (mood) {
    case MoodLabel::kPleasure: return "Pleasure";
    case MoodLabel::kExcitement: return "Excitement";
    case MoodLabel::kArousal: return "Arousal";
    case MoodLabel::kDistress: return "Distress";
    case MoodLabel::kMisery: return "Misery";
    case MoodLabel::kDepression: return "Depression";
    case MoodLabel::kSleepiness: return "Sleepiness";
    case MoodLabel::kContentment: return "Contentment";
    case MoodLabel::kNeutral: return "Neutral";
  }
  return "?";
}

std::optional<MoodLabel> mood_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kMoodCount; ++i) {
    const auto m = static_cast<MoodLabel>(i);
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

MoodLabel mood_from_likert(int happiness, int activeness) {
  validate_likert(happiness, activeness);
  const int dx = happiness - 2;
  const int dy = activeness - 2;
  if (dx == 0 && dy == 0) return MoodLabel::kNeutral;
  const double degrees = std::atan2(dy, dx) * 180.0 / std::numbers::pi;
  const long octant = std::lround(degrees / 45.0);
  return static_cast<MoodLabel>(((octant % 8) + 8) % 8);
}

MoodLabel opposite(MoodLabel mood) {
  if (mood == MoodLabel::kNeutral) return mood;
  return static_cast<MoodLabel>((static_cast<int>(mood) + 4) % 8);
}

std::vector<GroundTruthInterval> extend_emas(std::span<const EmaEntry> entries,
                                             double window_minutes, double span_start,
                                             double span_end) {
  if (!(window_minutes > 0.0))
    fail(ErrorCode::kInvalidArgument, "EMA window must be positive");
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].answered_at < entries[i - 1].answered_at)
      fail(ErrorCode::kInvalidArgument, "EMA entries must be sorted by answered_at");
  const double half = window_minutes * 60.0 / 2.0;
  std::vector<GroundTruthInterval> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double t = static_cast<double>(entries[i].answered_at);
    double left = t - half;
    double right = t + half;
    if (i > 0) {
      const double prev = static_cast<double>(entries[i - 1].answered_at);
      if (prev + half > left) left = 0.5 * (prev + t);
    }
    if (i + 1 < entries.size()) {
      const double next = static_cast<double>(entries[i + 1].answered_at);
      if (next - half < right) right = 0.5 * (t + next);
    }
    left = std::max(left, span_start);
    right = std::min(right, span_end);
    if (!(left < right)) continue;
    GroundTruthInterval gi;
    gi.left = left;
    gi.right = right;
    gi.happiness = entries[i].happiness;
    gi.activeness = entries[i].activeness;
    gi.mood = mood_from_likert(gi.happiness, gi.activeness);
    gi.source_ema = entries[i].answered_at;
    out.push_back(gi);
  }
  return out;
}

std::vector<LabeledExample> label_windows(std::span<const FeatureWindow> windows,
                                          std::span<const GroundTruthInterval> intervals,
                                          const std::string& day) {
  for (std::size_t i = 1; i < intervals.size(); ++i)
    if (intervals[i].left < intervals[i - 1].right)
      fail(ErrorCode::kInternal, "ground-truth intervals overlap or are unsorted");
  std::vector<LabeledExample> out;
  for (const auto& w : windows) {
    if (!w.valid()) continue;
    const double mid = w.midpoint();
    auto it = std::upper_bound(intervals.begin(), intervals.end(), mid,
                               [](double t, const GroundTruthInterval& gi) { return t < gi.left; });
    if (it == intervals.begin()) continue;
    --it;
    if (!(mid >= it->left && mid < it->right)) continue;
    LabeledExample ex;
    ex.features = w;
    ex.mood = it->mood;
    ex.happiness = it->happiness;
    ex.activeness = it->activeness;
    ex.source_ema = it->source_ema;
    ex.day = day;
    out.push_back(std::move(ex));
  }
  return out;
}

RareClassResult filter_rare_classes(std::vector<LabeledExample> examples, double min_fraction) {
  if (examples.empty()) fail(ErrorCode::kDegenerateDataset, "no labeled examples");
  RareClassResult r;
  for (const auto& e : examples) ++r.counts[e.mood];
  const double total = static_cast<double>(examples.size());
  for (const auto& [mood, count] : r.counts)
    if (static_cast<double>(count) / total < min_fraction) r.dropped.push_back(mood);
  if (r.dropped.size() == r.counts.size())
    fail(ErrorCode::kDegenerateDataset, "every mood falls below the rare-class threshold");
  for (auto& e : examples)
    if (std::find(r.dropped.begin(), r.dropped.end(), e.mood) == r.dropped.end())
      r.kept.push_back(std::move(e));
  return r;
}

}  // namespace wristmood
