#pragma once

// Straight-from-definition feature computations used only by tests. Nothing
// here calls into the library's statistics or DSP code.

#include <map>
#include <string>
#include <vector>

namespace wristmood::oracle {

struct OracleSignal {
  std::vector<double> x;
  double rate = 1.0;
};

/// Keys: acc_x, acc_y, acc_z, acc_norm, temp, hr, eda, scl, scr.
using OracleWindow = std::map<std::string, OracleSignal>;

/// Feature name ("<signal>.<STAT>") -> value, for every feature the window
/// supports. Undefined statistics are 0.
std::map<std::string, double> oracle_features(const OracleWindow& window,
                                              double hr_smooth_seconds = 5.0,
                                              double eda_smooth_seconds = 1.0);

/// Naive O(N^2) one-sided periodogram; returns {freqs, power}.
std::pair<std::vector<double>, std::vector<double>> naive_periodogram(const std::vector<double>& x,
                                                                      double rate);

}  // namespace wristmood::oracle
