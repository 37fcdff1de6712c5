#include "wristmood/error.hpp"
#include "wristmood/pipeline.hpp"

#include <algorithm>

namespace wristmood {

namespace fs = std::filesystem;

std::vector<fs::path> find_sessions(const fs::path& root) {
  if (!fs::exists(root)) fail(ErrorCode::kIo, "no such directory: " + root.string());
  if (fs::exists(root / "ACC.csv")) return {root};
  std::vector<fs::path> out;
  for (const auto& entry : fs::recursive_directory_iterator(root))
    if (entry.is_directory() && fs::exists(entry.path() / "ACC.csv")) out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

DayFeatures featurize(const SessionRecording& recording, const TimeZone& tz,
                      const PreprocessOptions& pre, const FeatureOptions& feat) {
  DayFeatures d;
  d.day = to_iso(recording.day(tz));
  d.session_id = recording.session_id;
  d.span_start = recording.earliest_start();
  d.span_end = recording.latest_end();
  d.warnings = recording.warnings;
  const auto channels = preprocess(recording, pre);
  d.warnings.insert(d.warnings.end(), channels.warnings.begin(), channels.warnings.end());
  for (auto& w : extract_all(channels, feat)) {
    if (w.valid())
      d.windows.push_back(std::move(w));
    else
      ++d.invalid_windows;
  }
  if (d.invalid_windows > 0)
    d.warnings.push_back(std::to_string(d.invalid_windows) + " windows with incomplete channels");
  return d;
}

Dataset load_dataset(const fs::path& sessions_root, const fs::path& ema_log, const TimeZone& tz,
                     const PreprocessOptions& pre, const FeatureOptions& feat) {
  std::vector<SessionRecording> recordings;
  for (const auto& dir : find_sessions(sessions_root)) recordings.push_back(parse_session(dir));
  auto emas = parse_ema_log(ema_log);
  auto split = split_days(std::move(emas), std::move(recordings), tz);
  Dataset ds;
  ds.orphans = std::move(split.orphans);
  for (auto& b : split.bundles) {
    auto d = featurize(b.recording, tz, pre, feat);
    d.emas = std::move(b.emas);
    ds.days.push_back(std::move(d));
  }
  return ds;
}

std::vector<LabeledExample> label_dataset(const Dataset& dataset, double window_minutes) {
  std::vector<LabeledExample> out;
  for (const auto& d : dataset.days) {
    const auto intervals = extend_emas(d.emas, window_minutes, d.span_start, d.span_end);
    auto labeled = label_windows(d.windows, intervals, d.day);
    std::move(labeled.begin(), labeled.end(), std::back_inserter(out));
  }
  return out;
}

}  // namespace wristmood
