#include <charconv>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "server.hpp"
#include "wristmood/config.hpp"
#include "wristmood/eval.hpp"
#include "wristmood/pipeline.hpp"
#include "wristmood/svm.hpp"
#include "wristmood/synth.hpp"

namespace fs = std::filesystem;
using namespace wristmood;

namespace {

struct Common {
  std::string timezone = "UTC";
  double window = 60.0;
  double overlap = 0.10;
};

struct Training {
  std::optional<std::uint64_t> seed;
  std::string target = "mood";
  int folds = 5;
  double rare = 0.10;
  std::vector<int> c_exponents = svm::GridOptions{}.c_exponents;
  std::vector<int> gamma_exponents = svm::GridOptions{}.gamma_exponents;
};

struct Outputs {
  std::string json;
  std::string text;
  std::string plot;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--timezone", c.timezone, "Fixed UTC offset for day splitting")
      ->capture_default_str();
  cmd->add_option("--window", c.window, "Feature window in seconds")->capture_default_str();
  cmd->add_option("--overlap", c.overlap, "Fraction of overlap between windows")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 0.99));
}

void add_training(CLI::App* cmd, Training& t, bool seed_required) {
  auto* seed = cmd->add_option("--seed", t.seed, "Random seed");
  if (seed_required) seed->required();
  cmd->add_option("--target", t.target, "mood, happiness or activeness")
      ->capture_default_str()
      ->check(CLI::IsMember({"mood", "happiness", "activeness"}));
  cmd->add_option("--folds", t.folds, "Cross-validation folds")->capture_default_str()
      ->check(CLI::Range(2, 100));
  cmd->add_option("--rare", t.rare, "Minimum mood share kept")->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--c-exponents", t.c_exponents, "Grid of log2 C")->delimiter(',');
  cmd->add_option("--gamma-exponents", t.gamma_exponents, "Grid of log2 gamma")->delimiter(',');
}

void add_outputs(CLI::App* cmd, Outputs& o) {
  cmd->add_option("-o,--output", o.json, "Report document (JSON)");
  cmd->add_option("--text", o.text, "Human-readable report");
  cmd->add_option("--plot", o.plot, "Plot data (CSV)");
}

PreprocessOptions pre_options() { return {}; }

FeatureOptions feature_options(const Common& c) {
  FeatureOptions f;
  f.window_seconds = c.window;
  f.overlap = c.overlap;
  return f;
}

RunConfig run_config(const Common& c, const Training& t) {
  RunConfig rc;
  rc.timezone = c.timezone;
  rc.window_seconds = c.window;
  rc.overlap = c.overlap;
  rc.c_exponents = t.c_exponents;
  rc.gamma_exponents = t.gamma_exponents;
  rc.folds = t.folds;
  rc.seed = t.seed;
  rc.rare_fraction = t.rare;
  rc.target = t.target;
  return rc;
}

EvalOptions eval_options(const RunConfig& rc) {
  EvalOptions o;
  o.target = *target_from_string(rc.target);
  o.ratio = rc.split_ratio;
  o.repeats = rc.repeats;
  o.seed = rc.seed.value_or(0);
  o.rare_fraction = rc.rare_fraction;
  o.grid = rc.grid();
  return o;
}

std::string number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorCode::kIo, "write error on " + path);
}

void emit(const Outputs& o, const std::string& json, const std::string& text,
          const std::string& plot) {
  if (!o.json.empty()) write_file(o.json, json);
  if (!o.text.empty()) write_file(o.text, text);
  if (!o.plot.empty()) write_file(o.plot, plot);
  std::cout << text;
}

void log_notes(const std::vector<std::string>& notes) {
  for (const auto& n : notes) spdlog::warn("event=note msg=\"{}\"", n);
}

std::vector<LabeledExample> load_labeled(const std::string& path) {
  auto examples = read_labeled_table(fs::path(path));
  spdlog::info("event=labeled_loaded path={} examples={}", path, examples.size());
  return examples;
}

int run_ingest(const std::string& root, const std::string& ema, const Common& c) {
  const auto tz = TimeZone::parse(c.timezone);
  std::vector<SessionRecording> recordings;
  std::size_t warnings = 0;
  for (const auto& dir : find_sessions(root)) {
    auto rec = parse_session(dir);
    for (const auto& w : rec.warnings) spdlog::warn("event=ingest_warning session={} msg=\"{}\"", rec.session_id, w);
    warnings += rec.warnings.size();
    std::cout << rec.session_id << "  day " << to_iso(rec.day(tz)) << "  span "
              << (rec.latest_end() - rec.earliest_start()) << " s  channels " << rec.channels.size()
              << (rec.feature_extractable() ? "" : "  (not feature-extractable)") << '\n';
    recordings.push_back(std::move(rec));
  }
  std::cout << recordings.size() << " sessions";
  if (!ema.empty()) {
    auto split = split_days(parse_ema_log(ema), std::move(recordings), tz);
    std::size_t matched = 0;
    for (const auto& b : split.bundles) matched += b.emas.size();
    std::cout << ", " << matched << " EMAs matched, " << split.orphans.size() << " orphans";
    if (!split.orphans.empty()) spdlog::warn("event=orphan_emas count={}", split.orphans.size());
  }
  std::cout << ", " << warnings << " warnings\n";
  return 0;
}

int run_features(const std::string& root, const std::string& out, const Common& c) {
  const auto tz = TimeZone::parse(c.timezone);
  std::vector<FeatureWindow> windows;
  for (const auto& dir : find_sessions(root)) {
    auto d = featurize(parse_session(dir), tz, pre_options(), feature_options(c));
    for (const auto& w : d.warnings) spdlog::warn("event=warning session={} msg=\"{}\"", d.session_id, w);
    spdlog::info("event=features session={} windows={}", d.session_id, d.windows.size());
    std::move(d.windows.begin(), d.windows.end(), std::back_inserter(windows));
  }
  std::stable_sort(windows.begin(), windows.end(),
                   [](const auto& a, const auto& b) { return a.start < b.start; });
  write_feature_table(fs::path(out), windows);
  std::cout << windows.size() << " windows x " << kFeatureCount << " features -> " << out << '\n';
  return 0;
}

int run_label(const std::string& root, const std::string& ema, double minutes,
              const std::string& out, const Common& c) {
  const auto tz = TimeZone::parse(c.timezone);
  const auto ds = load_dataset(root, ema, tz, pre_options(), feature_options(c));
  if (!ds.orphans.empty()) spdlog::warn("event=orphan_emas count={}", ds.orphans.size());
  const auto labeled = label_dataset(ds, minutes);
  write_labeled_table(fs::path(out), labeled);
  std::cout << labeled.size() << " labeled windows -> " << out << '\n';
  return 0;
}

int run_train(const std::string& in, const std::string& out, const Training& t) {
  const auto target = *target_from_string(t.target);
  auto rare = filter_rare_classes(load_labeled(in), t.rare);
  for (auto m : rare.dropped) spdlog::info("event=mood_dropped mood={}", to_string(m));
  const auto x = feature_matrix(rare.kept);
  const auto y = target_labels(rare.kept, target);
  Common c;
  auto grid = run_config(c, t).grid();
  std::vector<std::string> notes;
  auto model = svm::fit_with_grid_search(x, y, grid, &notes);
  log_notes(notes);
  model.target = t.target;
  for (int cls : model.classes) model.class_names.push_back(class_name(target, cls));
  svm::save_model(out, model);
  std::cout << "C=" << model.C << " gamma=" << model.gamma << " cv_accuracy=" << model.cv_accuracy
            << " classes=" << model.classes.size() << " -> " << out << '\n';
  return 0;
}

int run_predict(const std::string& model_path, const std::string& table, const std::string& out) {
  const auto model = svm::load_model(model_path);
  const auto target = target_from_string(model.target).value_or(Target::kMood);
  const auto windows = read_feature_table(fs::path(table));
  std::ostringstream csv;
  csv << "window_start,window_end," << to_string(target) << '\n';
  for (const auto& w : windows)
    csv << number(w.start) << ',' << number(w.end) << ','
        << class_name(target, model.predict(w.values)) << '\n';
  if (out.empty())
    std::cout << csv.str();
  else
    write_file(out, csv.str());
  return 0;
}

volatile std::sig_atomic_t g_stop = 0;
tools::EmaServer* g_server = nullptr;

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_logger_mt("wristmood");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("%Y-%m-%dT%H:%M:%S.%e level=%l %v");

  CLI::App app{"Mood classification from wristband recordings and EMA answers"};
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error, off")
      ->capture_default_str();

  Common common;
  Training training;
  Outputs outputs;
  std::string input, ema, output, model_path, static_dir, host = "127.0.0.1";
  double ema_window = 60.0;
  std::vector<double> windows = {30.0, 60.0, 120.0};
  double ratio = 0.75;
  int repeats = 5;
  bool shuffle = false;
  int port = 8080;
  int days = 15;
  synth::SynthOptions synth_opts;
  std::optional<std::uint64_t> synth_seed;
  std::optional<double> markov;

  auto* ingest = app.add_subcommand("ingest", "Parse session directories and an EMA log");
  ingest->add_option("sessions", input, "Session directory or root")->required();
  ingest->add_option("--ema", ema, "EMA log (newline-delimited JSON)");
  add_common(ingest, common);

  auto* features = app.add_subcommand("features", "Extract the feature table");
  features->add_option("sessions", input, "Session directory or root")->required();
  features->add_option("-o,--output", output, "Feature table (CSV)")->required();
  add_common(features, common);

  auto* label = app.add_subcommand("label", "Label feature windows from EMA answers");
  label->add_option("sessions", input, "Session directory or root")->required();
  label->add_option("--ema", ema, "EMA log")->required();
  label->add_option("--ema-window", ema_window, "EMA window in minutes")->capture_default_str();
  label->add_option("-o,--output", output, "Labeled table (CSV)")->required();
  add_common(label, common);

  auto* train = app.add_subcommand("train", "Grid-search and train a classifier");
  train->add_option("labeled", input, "Labeled table")->required();
  train->add_option("-o,--output", output, "Model file")->required();
  add_training(train, training, true);

  auto* predict = app.add_subcommand("predict", "Classify the windows of a feature table");
  predict->add_option("model", model_path, "Model file")->required();
  predict->add_option("features", input, "Feature table")->required();
  predict->add_option("-o,--output", output, "Predictions (CSV); stdout when omitted");

  auto add_split = [&](CLI::App* cmd) {
    cmd->add_option("--ratio", ratio, "Training fraction")->capture_default_str()
        ->check(CLI::Range(0.05, 0.95));
    cmd->add_option("--repeats", repeats, "Random splits")->capture_default_str()
        ->check(CLI::Range(1, 1000));
  };
  auto* eval_split_cmd = app.add_subcommand("eval-split", "Repeated random-split evaluation");
  eval_split_cmd->add_option("labeled", input, "Labeled table")->required();
  add_training(eval_split_cmd, training, true);
  add_split(eval_split_cmd);
  eval_split_cmd->add_flag("--shuffle-labels", shuffle, "Permute labels (chance control)");
  add_outputs(eval_split_cmd, outputs);

  auto* eval_lodo_cmd = app.add_subcommand("eval-lodo", "Leave-one-day-out evaluation");
  eval_lodo_cmd->add_option("labeled", input, "Labeled table")->required();
  add_training(eval_lodo_cmd, training, true);
  add_outputs(eval_lodo_cmd, outputs);

  auto* compare = app.add_subcommand("compare-windows", "Compare EMA window lengths");
  compare->add_option("sessions", input, "Session directory or root")->required();
  compare->add_option("--ema", ema, "EMA log")->required();
  compare->add_option("--windows", windows, "EMA windows in minutes")->delimiter(',')
      ->capture_default_str();
  add_common(compare, common);
  add_training(compare, training, true);
  add_split(compare);
  add_outputs(compare, outputs);

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic study");
  synth_cmd->add_option("-o,--output", output, "Output directory")->default_val("synthetic");
  synth_cmd->add_option("--days", days, "Number of days")->capture_default_str()
      ->check(CLI::Range(1, 366));
  synth_cmd->add_option("--seed", synth_seed, "Random seed")->required();
  synth_cmd->add_option("--prompts", synth_opts.prompts_per_day, "EMA prompts per day")
      ->capture_default_str()->check(CLI::Range(1, 48));
  synth_cmd->add_option("--slot-minutes", synth_opts.slot_minutes, "Minutes per mood state")
      ->capture_default_str();
  synth_cmd->add_option("--separability", synth_opts.separability, "Spread between states")
      ->capture_default_str()->check(CLI::Range(0.0, 100.0));
  synth_cmd->add_option("--markov-stay", markov, "Markov chain stay probability")
      ->check(CLI::Range(0.0, 1.0));

  auto* serve = app.add_subcommand("serve", "Collect EMA submissions over HTTP");
  serve->add_option("--ema-log", ema, "EMA log to append to")->required();
  serve->add_option("--host", host, "Listen address")->capture_default_str();
  serve->add_option("--port", port, "Listen port (0 picks one)")->capture_default_str();
  serve->add_option("--static", static_dir, "Web client directory");
  serve->add_option("--model", model_path, "Model for /prediction");
  serve->add_option("--features", output, "Live feature table for /prediction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    if (*ingest) return run_ingest(input, ema, common);
    if (*features) return run_features(input, output, common);
    if (*label) return run_label(input, ema, ema_window, output, common);
    if (*train) return run_train(input, output, training);
    if (*predict) return run_predict(model_path, input, output);
    if (*eval_split_cmd || *eval_lodo_cmd) {
      auto rc = run_config(common, training);
      rc.split_ratio = ratio;
      rc.repeats = repeats;
      rc.paths["labeled"] = input;
      auto examples = load_labeled(input);
      if (shuffle) examples = shuffle_labels(std::move(examples), *training.seed);
      const auto opts = eval_options(rc);
      auto report = *eval_split_cmd ? eval_split(examples, opts) : eval_lodo(examples, opts);
      rc.ema_window_minutes = report.config.ema_window_minutes;
      report.config = rc;
      log_notes(report.notes);
      emit(outputs, report_json(report), report_text(report), report_plot_csv(report));
      return 0;
    }
    if (*compare) {
      auto rc = run_config(common, training);
      rc.split_ratio = ratio;
      rc.repeats = repeats;
      rc.paths["sessions"] = input;
      rc.paths["ema"] = ema;
      const auto tz = TimeZone::parse(common.timezone);
      const auto ds = load_dataset(input, ema, tz, pre_options(), feature_options(common));
      auto cmp = compare_windows(ds, windows, eval_options(rc));
      for (auto& r : cmp.reports) {
        const double w = r.config.ema_window_minutes;
        r.config = rc;
        r.config.ema_window_minutes = w;
        log_notes(r.notes);
      }
      log_notes(cmp.notes);
      emit(outputs, comparison_json(cmp), comparison_text(cmp), comparison_plot_csv(cmp));
      return 0;
    }
    if (*synth_cmd) {
      synth_opts.markov_stay = markov;
      const auto study = synth::generate_study(output, days, synth_opts, *synth_seed);
      std::cout << study.days.size() << " days -> " << output << '\n';
      return 0;
    }
    if (*serve) {
      tools::ServerOptions so;
      so.host = host;
      so.port = port;
      so.ema_log = ema;
      if (!static_dir.empty()) so.static_dir = static_dir;
      if (!model_path.empty()) so.model = model_path;
      if (!output.empty()) so.features = output;
      tools::EmaServer server(so);
      const int bound = server.bind();
      g_server = &server;
      std::signal(SIGINT, [](int) { g_stop = 1; if (g_server) g_server->stop(); });
      std::signal(SIGTERM, [](int) { g_stop = 1; if (g_server) g_server->stop(); });
      spdlog::info("event=listening host={} port={}", host, bound);
      std::cout << "listening on " << host << ':' << bound << std::endl;
      server.listen();
      g_server = nullptr;
      return 0;
    }
  } catch (const Error& e) {
    spdlog::error("event=failed code={} msg=\"{}\"", to_string(e.code()), e.what());
    return e.is_io() ? 2 : 1;
  } catch (const fs::filesystem_error& e) {
    spdlog::error("event=failed code=io msg=\"{}\"", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("event=failed msg=\"{}\"", e.what());
    return 1;
  }
  return 0;
}
