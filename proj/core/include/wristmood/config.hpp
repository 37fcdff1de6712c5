#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wristmood/svm.hpp"

namespace wristmood {

/// Settings shared by the batch commands; echoed into every report.
struct RunConfig {
  std::string timezone = "UTC";
  double window_seconds = 60.0;
  double overlap = 0.10;
  double ema_window_minutes = 60.0;
  std::vector<int> c_exponents = svm::GridOptions{}.c_exponents;
  std::vector<int> gamma_exponents = svm::GridOptions{}.gamma_exponents;
  int folds = 5;
  std::optional<std::uint64_t> seed;
  double rare_fraction = 0.10;
  double split_ratio = 0.75;
  int repeats = 5;
  std::string target = "mood";
  std::map<std::string, std::string> paths;

  svm::GridOptions grid() const;
  std::string to_json() const;
  static RunConfig from_json(const std::string& text);

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

}  // namespace wristmood
