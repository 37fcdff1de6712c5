#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "wristmood/groundtruth.hpp"
#include "wristmood/ingest.hpp"

namespace wristmood::synth {

/// Physiological parameters of one mood state.
struct MoodProfile {
  double hr_baseline = 75.0;   // bpm
  double hr_sd = 2.0;          // bpm
  double eda_tonic = 2.0;      // uS
  double scr_rate = 2.0;       // events per minute
  double scr_amplitude = 0.3;  // uS
  double acc_activity = 4.0;   // raw units, per-axis sd of movement
  double temp_mean = 33.0;     // degC
};

using ProfileTable = std::array<MoodProfile, kMoodCount>;

/// Circumplex-derived profiles; separability scales every state's offset
/// from the neutral profile (0 makes all states identical).
ProfileTable default_profiles(double separability = 1.0);

struct TruthSpan {
  double start = 0.0;
  double end = 0.0;
  MoodLabel mood = MoodLabel::kNeutral;
};

struct SynthOptions {
  int prompts_per_day = 5;
  double slot_minutes = 90.0;     // length of each mood state
  double lead_in_minutes = 15.0;  // neutral period before the first state
  double max_delay_minutes = 30.0;
  double separability = 1.0;
  /// States cycle through this palette; each day uses a fresh permutation.
  std::vector<MoodLabel> palette = {MoodLabel::kPleasure, MoodLabel::kArousal,
                                    MoodLabel::kDistress, MoodLabel::kMisery,
                                    MoodLabel::kSleepiness};
  /// When set, states follow a Markov chain over the palette that keeps the
  /// current state with this probability.
  std::optional<double> markov_stay;
  double day_start_unix = 1554163200.0 + 8 * 3600.0;  // 2019-04-02 08:00 UTC
};

struct SynthDay {
  SessionRecording recording;
  std::vector<EmaEntry> emas;
  std::vector<TruthSpan> truth;
};

/// One day of device-rate channels (ACC 32 Hz, EDA and Temp 4 Hz, HR 1 Hz)
/// with EMAs answered 0..max_delay after prompts at each slot.
SynthDay generate_day(const SynthOptions& options, int day_index, std::uint64_t seed);

struct SynthStudy {
  std::vector<SynthDay> days;
};

/// Writes root/day_NN session directories, root/ema.ndjson and
/// root/truth.csv (day, start, end, mood).
SynthStudy generate_study(const std::filesystem::path& root, int days, const SynthOptions& options,
                          std::uint64_t seed);

}  // namespace wristmood::synth
