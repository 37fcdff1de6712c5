#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wristmood/config.hpp"
#include "wristmood/groundtruth.hpp"
#include "wristmood/matrix.hpp"
#include "wristmood/pipeline.hpp"
#include "wristmood/stats.hpp"
#include "wristmood/svm.hpp"

namespace wristmood {

enum class Target { kMood, kHappiness, kActiveness };

std::string_view to_string(Target target);
std::optional<Target> target_from_string(std::string_view name);

/// Integer class per example: the MoodLabel index or the Likert value.
std::vector<int> target_labels(std::span<const LabeledExample> examples, Target target);
std::string class_name(Target target, int label);
Matrix feature_matrix(std::span<const LabeledExample> examples);

/// Permutes mood, happiness and activeness jointly across examples; used
/// for chance-level controls.
std::vector<LabeledExample> shuffle_labels(std::vector<LabeledExample> examples,
                                           std::uint64_t seed);

/// Shuffled indices of n examples; the first round(ratio * n) are training.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};
SplitIndices random_split(std::size_t n, double ratio, std::uint64_t seed, std::uint64_t stream);

struct EvalOptions {
  Target target = Target::kMood;
  double ratio = 0.75;
  int repeats = 5;
  std::uint64_t seed = 0;
  double rare_fraction = 0.10;
  svm::GridOptions grid;
  int max_redraws = 100;
};

struct EvalRun {
  std::string name;  // "repeat 0" or the test day
  double accuracy = 0.0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::uint64_t stream = 0;  // sub-seed stream of the split (split protocol)
  double C = 0.0;
  double gamma = 0.0;
  double cv_accuracy = 0.0;
};

struct EvalReport {
  Target target = Target::kMood;
  std::string protocol;  // "split" or "lodo"
  std::vector<EvalRun> runs;
  double mean = 0.0;
  double std = 0.0;
  std::vector<int> classes;
  std::vector<std::string> class_names;
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted], summed over runs
  std::vector<std::string> dropped_moods;
  std::vector<std::string> notes;
  RunConfig config;
};

/// Repeated random train/test splits; the scaler, grid search and final fit
/// see only the training part. Rare moods are filtered once beforehand.
EvalReport eval_split(const std::vector<LabeledExample>& examples, const EvalOptions& options);

/// Leave-one-day-out. Days whose labels are missing from the other days are
/// skipped and noted.
EvalReport eval_lodo(const std::vector<LabeledExample>& examples, const EvalOptions& options);

struct WindowComparison {
  std::vector<double> windows;  // minutes
  std::vector<EvalReport> reports;
  std::optional<stats::AnovaResult> anova;
  std::optional<stats::TukeyResult> tukey;
  std::vector<std::string> notes;
};

/// Re-labels the same feature windows for each EMA window length and runs
/// eval_split; compares the per-repeat accuracies with ANOVA and Tukey HSD.
WindowComparison compare_windows(const Dataset& dataset, const std::vector<double>& windows,
                                 const EvalOptions& options);

std::string report_json(const EvalReport& report);
std::string report_text(const EvalReport& report);
/// One row per run: name, accuracy.
std::string report_plot_csv(const EvalReport& report);

std::string comparison_json(const WindowComparison& comparison);
std::string comparison_text(const WindowComparison& comparison);
/// One row per window: minutes, mean, std, runs, significance marks against
/// the other windows ("*" 0.05, "**" 0.01, "***" 0.001).
std::string comparison_plot_csv(const WindowComparison& comparison);

}  // namespace wristmood
