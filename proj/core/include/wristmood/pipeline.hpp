#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wristmood/features.hpp"
#include "wristmood/groundtruth.hpp"
#include "wristmood/ingest.hpp"
#include "wristmood/preprocess.hpp"

namespace wristmood {

/// Feature windows and EMAs of one recording day.
struct DayFeatures {
  std::string day;  // ISO date
  std::string session_id;
  double span_start = 0.0;  // recording span used to clip EMA intervals
  double span_end = 0.0;
  std::vector<FeatureWindow> windows;  // valid windows only
  std::size_t invalid_windows = 0;
  std::vector<EmaEntry> emas;
  std::vector<std::string> warnings;
};

struct Dataset {
  std::vector<DayFeatures> days;  // sorted by day
  std::vector<EmaEntry> orphans;
};

/// Session directories under root: root itself when it holds ACC.csv,
/// otherwise every descendant directory that does, sorted by path.
std::vector<std::filesystem::path> find_sessions(const std::filesystem::path& root);

DayFeatures featurize(const SessionRecording& recording, const TimeZone& tz,
                      const PreprocessOptions& pre = {}, const FeatureOptions& feat = {});

/// Parses sessions and the EMA log, pairs them by day and extracts features.
Dataset load_dataset(const std::filesystem::path& sessions_root,
                     const std::filesystem::path& ema_log, const TimeZone& tz,
                     const PreprocessOptions& pre = {}, const FeatureOptions& feat = {});

/// Extends every day's EMAs over window_minutes and labels its windows.
std::vector<LabeledExample> label_dataset(const Dataset& dataset, double window_minutes);

/// Feature table: window_start, window_end, then one column per feature.
void write_feature_table(std::ostream& out, std::span<const FeatureWindow> windows);
std::vector<FeatureWindow> read_feature_table(std::istream& in);

/// Feature table plus mood, happiness, activeness, source_ema and day.
void write_labeled_table(std::ostream& out, std::span<const LabeledExample> examples);
std::vector<LabeledExample> read_labeled_table(std::istream& in);

std::vector<FeatureWindow> read_feature_table(const std::filesystem::path& path);
std::vector<LabeledExample> read_labeled_table(const std::filesystem::path& path);
void write_feature_table(const std::filesystem::path& path, std::span<const FeatureWindow> windows);
void write_labeled_table(const std::filesystem::path& path, std::span<const LabeledExample> examples);

}  // namespace wristmood
