#pragma once

#include <span>
#include <string>
#include <vector>

#include "wristmood/dsp.hpp"
#include "wristmood/ingest.hpp"

namespace wristmood {

/// A conditioned signal with its own time base.
struct Signal {
  double start_time = 0.0;
  double sample_rate = 1.0;
  std::vector<double> samples;

  double end_time() const { return start_time + static_cast<double>(samples.size()) / sample_rate; }
};

struct PreprocessOptions {
  double acc_low_hz = 0.2;
  double acc_high_hz = 10.0;
  int acc_order = 3;
  double temp_jump_c = 2.0;
  double hr_basal_seconds = 600.0;
  double eda_cutoff_hz = 1.5;
  int eda_order = 3;
  double scl_cutoff_hz = 0.05;
  int scl_order = 2;
};

struct PreprocessedChannels {
  Signal acc_x, acc_y, acc_z, acc_norm;
  Signal temp_clean;
  Signal hr_norm;
  Signal eda_filt, scl, scr;
  std::size_t temp_discarded = 0;
  std::size_t eda_negative = 0;
  std::vector<std::string> warnings;
};

struct AccFiltered {
  std::vector<double> x, y, z, norm;
};

/// Euclidean norm of the three axes, then zero-phase band-pass on all four.
AccFiltered acc_preprocess(std::span<const double> x, std::span<const double> y,
                           std::span<const double> z, double rate_hz,
                           const PreprocessOptions& options = {});

std::vector<double> acc_norm(std::span<const double> x, std::span<const double> y,
                             std::span<const double> z);

struct TempCleaned {
  std::vector<double> samples;
  std::size_t discarded = 0;
};

/// Sample-and-hold over jumps larger than the threshold relative to the last
/// accepted value. The first sample is always accepted.
TempCleaned temp_clean(std::span<const double> temp, double threshold_c = 2.0);

struct HrNormalized {
  std::vector<double> samples;
  bool short_basal = false;  // recording shorter than the basal span
};

/// Ratio to the mean of the first basal_seconds * rate samples.
HrNormalized hr_normalize(std::span<const double> hr, double rate_hz,
                          double basal_seconds = 600.0);

struct EdaComponents {
  std::vector<double> eda_filt, scl, scr;
};

/// eda_filt = low-pass(eda); scl = low-pass(eda_filt) at the tonic cutoff;
/// scr = eda_filt - scl. Both filters are zero-phase.
EdaComponents eda_decompose(std::span<const double> eda, double rate_hz,
                            const PreprocessOptions& options = {});

/// Runs all channel conditioning for one session.
PreprocessedChannels preprocess(const SessionRecording& recording,
                                const PreprocessOptions& options = {});

}  // namespace wristmood
