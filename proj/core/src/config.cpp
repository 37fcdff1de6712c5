#include "wristmood/config.hpp"

#include "json.hpp"
#include "wristmood/error.hpp"

namespace wristmood {

svm::GridOptions RunConfig::grid() const {
  svm::GridOptions g;
  g.c_exponents = c_exponents;
  g.gamma_exponents = gamma_exponents;
  g.folds = folds;
  g.seed = seed.value_or(0);
  return g;
}

std::string RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["timezone"] = timezone;
  j["window_seconds"] = window_seconds;
  j["overlap"] = overlap;
  j["ema_window_minutes"] = ema_window_minutes;
  j["c_exponents"] = c_exponents;
  j["gamma_exponents"] = gamma_exponents;
  j["folds"] = folds;
  j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
  j["rare_fraction"] = rare_fraction;
  j["split_ratio"] = split_ratio;
  j["repeats"] = repeats;
  j["target"] = target;
  j["paths"] = paths;
  return j.dump();
}

RunConfig RunConfig::from_json(const std::string& text) {
  RunConfig c;
  try {
    const auto j = nlohmann::json::parse(text);
    c.timezone = j.at("timezone").get<std::string>();
    c.window_seconds = j.at("window_seconds").get<double>();
    c.overlap = j.at("overlap").get<double>();
    c.ema_window_minutes = j.at("ema_window_minutes").get<double>();
    c.c_exponents = j.at("c_exponents").get<std::vector<int>>();
    c.gamma_exponents = j.at("gamma_exponents").get<std::vector<int>>();
    c.folds = j.at("folds").get<int>();
    if (!j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
    c.rare_fraction = j.at("rare_fraction").get<double>();
    c.split_ratio = j.at("split_ratio").get<double>();
    c.repeats = j.at("repeats").get<int>();
    c.target = j.at("target").get<std::string>();
    c.paths = j.at("paths").get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kMissingField, std::string("invalid run config: ") + e.what());
  }
  return c;
}

}  // namespace wristmood
