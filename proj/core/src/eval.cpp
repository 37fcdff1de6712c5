#include "wristmood/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "numfmt.hpp"
#include "wristmood/random.hpp"

namespace wristmood {

std::string_view to_string(Target target) {
  switch (target) {
    case Target::kMood: return "mood";
    case Target::kHappiness: return "happiness";
    case Target::kActiveness: return "activeness";
  }
  return "?";
}

std::optional<Target> target_from_string(std::string_view name) {
  for (auto t : {Target::kMood, Target::kHappiness, Target::kActiveness})
    if (to_string(t) == name) return t;
  return std::nullopt;
}

std::vector<int> target_labels(std::span<const LabeledExample> examples, Target target) {
  std::vector<int> y;
  y.reserve(examples.size());
  for (const auto& e : examples) {
    switch (target) {
      case Target::kMood: y.push_back(static_cast<int>(e.mood)); break;
      case Target::kHappiness: y.push_back(e.happiness); break;
      case Target::kActiveness: y.push_back(e.activeness); break;
    }
  }
  return y;
}

std::string class_name(Target target, int label) {
  if (target == Target::kMood) return std::string(to_string(static_cast<MoodLabel>(label)));
  return std::to_string(label);
}

Matrix feature_matrix(std::span<const LabeledExample> examples) {
  Matrix m(0, kFeatureCount);
  for (const auto& e : examples) m.append_row(e.features.values);
  return m;
}

std::vector<LabeledExample> shuffle_labels(std::vector<LabeledExample> examples,
                                           std::uint64_t seed) {
  std::vector<std::size_t> perm(examples.size());
  std::iota(perm.begin(), perm.end(), 0);
  auto rng = make_rng(seed, 0x5a5a);
  std::shuffle(perm.begin(), perm.end(), rng);
  auto out = examples;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& src = examples[perm[i]];
    out[i].mood = src.mood;
    out[i].happiness = src.happiness;
    out[i].activeness = src.activeness;
    out[i].source_ema = src.source_ema;
  }
  return out;
}

SplitIndices random_split(std::size_t n, double ratio, std::uint64_t seed, std::uint64_t stream) {
  if (n < 2) fail(ErrorCode::kDegenerateDataset, "need at least two examples to split");
  if (!(ratio > 0.0 && ratio < 1.0)) fail(ErrorCode::kInvalidArgument, "split ratio must be in (0, 1)");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  auto rng = make_rng(seed, stream);
  std::shuffle(idx.begin(), idx.end(), rng);
  auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  SplitIndices s;
  s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

namespace {

struct Prepared {
  std::vector<LabeledExample> examples;
  Matrix x;
  std::vector<int> y;
  std::vector<int> classes;
};

Prepared prepare(const std::vector<LabeledExample>& examples, const EvalOptions& options,
                 EvalReport& report) {
  if (examples.empty()) fail(ErrorCode::kDegenerateDataset, "no labeled examples");
  auto rare = filter_rare_classes(examples, options.rare_fraction);
  for (auto m : rare.dropped) {
    report.dropped_moods.emplace_back(to_string(m));
    report.notes.push_back("dropped mood " + std::string(to_string(m)) + " (" +
                           std::to_string(rare.counts[m]) + " of " +
                           std::to_string(examples.size()) + " examples)");
  }
  Prepared p;
  p.examples = std::move(rare.kept);
  p.x = feature_matrix(p.examples);
  p.y = target_labels(p.examples, options.target);
  p.classes = p.y;
  std::sort(p.classes.begin(), p.classes.end());
  p.classes.erase(std::unique(p.classes.begin(), p.classes.end()), p.classes.end());
  if (p.classes.size() < 2)
    fail(ErrorCode::kSingleClass, "fewer than two " + std::string(to_string(options.target)) +
                                      " classes after rare-class filtering");
  report.target = options.target;
  report.classes = p.classes;
  for (int c : p.classes) report.class_names.push_back(class_name(options.target, c));
  report.confusion.assign(p.classes.size(), std::vector<std::size_t>(p.classes.size(), 0));
  report.config.seed = options.seed;
  report.config.c_exponents = options.grid.c_exponents;
  report.config.gamma_exponents = options.grid.gamma_exponents;
  report.config.folds = options.grid.folds;
  report.config.rare_fraction = options.rare_fraction;
  report.config.split_ratio = options.ratio;
  report.config.repeats = options.repeats;
  report.config.target = std::string(to_string(options.target));
  return p;
}

std::size_t class_index(const std::vector<int>& classes, int label) {
  return static_cast<std::size_t>(std::lower_bound(classes.begin(), classes.end(), label) -
                                  classes.begin());
}

EvalRun fit_and_score(const Prepared& p, std::span<const std::size_t> train,
                      std::span<const std::size_t> test, const EvalOptions& options,
                      EvalReport& report) {
  std::vector<int> y_train;
  for (auto i : train) y_train.push_back(p.y[i]);
  auto grid = options.grid;
  grid.seed = options.seed;
  std::vector<std::string> notes;
  const auto model = svm::fit_with_grid_search(p.x.select(train), y_train, grid, &notes);
  for (auto& n : notes) report.notes.push_back(std::move(n));
  std::size_t correct = 0;
  for (auto i : test) {
    const int pred = model.predict(p.x.row(i));
    correct += pred == p.y[i];
    const auto pi = class_index(p.classes, pred);
    if (pi < p.classes.size() && p.classes[pi] == pred)
      ++report.confusion[class_index(p.classes, p.y[i])][pi];
  }
  EvalRun run;
  run.accuracy = static_cast<double>(correct) / static_cast<double>(test.size());
  run.train_size = train.size();
  run.test_size = test.size();
  run.C = model.C;
  run.gamma = model.gamma;
  run.cv_accuracy = model.cv_accuracy;
  return run;
}

void summarize(EvalReport& report) {
  std::vector<double> acc;
  for (const auto& r : report.runs) acc.push_back(r.accuracy);
  report.mean = stats::mean(acc);
  report.std = stats::sample_std(acc);
}

}  // namespace

EvalReport eval_split(const std::vector<LabeledExample>& examples, const EvalOptions& options) {
  if (options.repeats < 1) fail(ErrorCode::kInvalidArgument, "repeats must be >= 1");
  EvalReport report;
  report.protocol = "split";
  const auto p = prepare(examples, options, report);
  for (int r = 0; r < options.repeats; ++r) {
    std::optional<SplitIndices> split;
    std::uint64_t stream = 0;
    for (int attempt = 0; attempt < options.max_redraws; ++attempt) {
      stream = (static_cast<std::uint64_t>(r) << 20) | static_cast<std::uint64_t>(attempt);
      auto s = random_split(p.y.size(), options.ratio, options.seed, stream);
      std::set<int> seen;
      for (auto i : s.train) seen.insert(p.y[i]);
      if (seen.size() == p.classes.size()) {
        split = std::move(s);
        break;
      }
      report.notes.push_back("repeat " + std::to_string(r) + ": split " +
                             std::to_string(attempt) + " missed a class in training, redrawn");
    }
    if (!split)
      fail(ErrorCode::kDegenerateDataset, "could not draw a training part holding every class in " +
                                              std::to_string(options.max_redraws) + " attempts");
    auto run = fit_and_score(p, split->train, split->test, options, report);
    run.name = "repeat " + std::to_string(r);
    run.stream = stream;
    report.runs.push_back(std::move(run));
  }
  summarize(report);
  return report;
}

EvalReport eval_lodo(const std::vector<LabeledExample>& examples, const EvalOptions& options) {
  EvalReport report;
  report.protocol = "lodo";
  const auto p = prepare(examples, options, report);
  std::map<std::string, std::vector<std::size_t>> by_day;
  for (std::size_t i = 0; i < p.examples.size(); ++i) by_day[p.examples[i].day].push_back(i);
  if (by_day.size() < 2)
    fail(ErrorCode::kTooFewDays, "leave-one-day-out needs at least two days, got " +
                                     std::to_string(by_day.size()));
  for (const auto& [day, test] : by_day) {
    std::vector<std::size_t> train;
    std::set<int> train_classes;
    for (const auto& [other, idx] : by_day)
      if (other != day)
        for (auto i : idx) {
          train.push_back(i);
          train_classes.insert(p.y[i]);
        }
    std::sort(train.begin(), train.end());
    std::set<std::string> unseen;
    for (auto i : test)
      if (!train_classes.contains(p.y[i])) unseen.insert(class_name(options.target, p.y[i]));
    if (!unseen.empty()) {
      std::string list;
      for (const auto& u : unseen) list += (list.empty() ? "" : ", ") + u;
      report.notes.push_back("skipped day " + day + ": labels not seen in training (" + list + ")");
      continue;
    }
    if (train_classes.size() < 2) {
      report.notes.push_back("skipped day " + day + ": training days hold a single class");
      continue;
    }
    if (train.size() < static_cast<std::size_t>(options.grid.folds)) {
      report.notes.push_back("skipped day " + day + ": too few training examples");
      continue;
    }
    auto run = fit_and_score(p, train, test, options, report);
    run.name = day;
    report.runs.push_back(std::move(run));
  }
  if (report.runs.size() < 2)
    fail(ErrorCode::kTooFewDays, "fewer than two usable days for leave-one-day-out");
  summarize(report);
  return report;
}

WindowComparison compare_windows(const Dataset& dataset, const std::vector<double>& windows,
                                 const EvalOptions& options) {
  if (windows.empty()) fail(ErrorCode::kInvalidArgument, "no EMA windows to compare");
  WindowComparison cmp;
  cmp.windows = windows;
  std::vector<std::vector<double>> groups;
  for (double w : windows) {
    auto report = eval_split(label_dataset(dataset, w), options);
    report.config.ema_window_minutes = w;
    std::vector<double> acc;
    for (const auto& r : report.runs) acc.push_back(r.accuracy);
    groups.push_back(std::move(acc));
    cmp.reports.push_back(std::move(report));
  }
  if (windows.size() < 2) {
    cmp.notes.push_back("single window: no comparison");
  } else if (options.repeats < 2) {
    cmp.notes.push_back("fewer than two repeats per window: no comparison");
  } else {
    cmp.anova = stats::one_way_anova(groups);
    cmp.tukey = stats::tukey_hsd(groups);
    if (cmp.anova->degenerate)
      cmp.notes.push_back("zero within-window variance: ANOVA and Tukey are degenerate");
  }
  return cmp;
}

namespace {

using nlohmann::ordered_json;

ordered_json report_doc(const EvalReport& r) {
  ordered_json j;
  j["target"] = std::string(to_string(r.target));
  j["protocol"] = r.protocol;
  j["mean"] = r.mean;
  j["std"] = r.std;
  ordered_json runs = ordered_json::array();
  for (const auto& run : r.runs) {
    ordered_json rj;
    rj["name"] = run.name;
    rj["accuracy"] = run.accuracy;
    rj["train_size"] = run.train_size;
    rj["test_size"] = run.test_size;
    if (r.protocol == "split") rj["stream"] = run.stream;
    rj["C"] = run.C;
    rj["gamma"] = run.gamma;
    rj["cv_accuracy"] = run.cv_accuracy;
    runs.push_back(std::move(rj));
  }
  j["runs"] = std::move(runs);
  j["classes"] = r.class_names;
  j["confusion"] = r.confusion;
  j["dropped_moods"] = r.dropped_moods;
  j["notes"] = r.notes;
  j["config"] = ordered_json::parse(r.config.to_json());
  return j;
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string marks(double q, const stats::TukeyResult& t) {
  std::string m;
  for (std::size_t a = 0; a < t.alphas.size(); ++a)
    if (q > t.critical[a]) m += '*';
  return m;
}

}  // namespace

std::string report_json(const EvalReport& report) { return report_doc(report).dump(2) + "\n"; }

std::string report_text(const EvalReport& report) {
  std::ostringstream out;
  out << "target " << to_string(report.target) << ", protocol " << report.protocol << "\n\n";
  out << pad("run", 14) << pad("accuracy", 10) << pad("train", 7) << pad("test", 6)
      << pad("C", 10) << "gamma\n";
  for (const auto& r : report.runs)
    out << pad(r.name, 14) << pad(fixed(r.accuracy), 10) << pad(std::to_string(r.train_size), 7)
        << pad(std::to_string(r.test_size), 6) << pad(detail::format_number(r.C), 10)
        << detail::format_number(r.gamma) << '\n';
  out << "\naccuracy " << fixed(100.0 * report.mean, 2) << "% +/- " << fixed(100.0 * report.std, 2)
      << "%\n\nconfusion (rows true, columns predicted)\n";
  out << pad("", 13);
  for (const auto& n : report.class_names) out << pad(n.substr(0, 11), 12);
  out << '\n';
  for (std::size_t i = 0; i < report.confusion.size(); ++i) {
    out << pad(report.class_names[i], 13);
    for (auto c : report.confusion[i]) out << pad(std::to_string(c), 12);
    out << '\n';
  }
  if (!report.notes.empty()) {
    out << "\nnotes\n";
    for (const auto& n : report.notes) out << "  " << n << '\n';
  }
  return out.str();
}

std::string report_plot_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "run,accuracy\n";
  for (const auto& r : report.runs) out << r.name << ',' << detail::format_number(r.accuracy) << '\n';
  return out.str();
}

std::string comparison_json(const WindowComparison& c) {
  ordered_json j;
  j["windows"] = c.windows;
  ordered_json reports = ordered_json::array();
  for (const auto& r : c.reports) reports.push_back(report_doc(r));
  j["reports"] = std::move(reports);
  if (c.anova) {
    j["anova"] = {{"F", c.anova->F},
                  {"p", c.anova->p},
                  {"df_between", c.anova->df_between},
                  {"df_within", c.anova->df_within},
                  {"degenerate", c.anova->degenerate}};
  } else {
    j["anova"] = nullptr;
  }
  if (c.tukey) {
    ordered_json t;
    t["alphas"] = c.tukey->alphas;
    t["critical"] = c.tukey->critical;
    ordered_json pairs = ordered_json::array();
    for (const auto& p : c.tukey->pairs) {
      ordered_json pj;
      pj["a"] = c.windows[p.i];
      pj["b"] = c.windows[p.j];
      pj["mean_diff"] = p.mean_diff;
      pj["q"] = std::isfinite(p.q) ? ordered_json(p.q) : ordered_json("inf");
      pj["significant"] = p.significant;
      pairs.push_back(std::move(pj));
    }
    t["pairs"] = std::move(pairs);
    t["degenerate"] = c.tukey->degenerate;
    j["tukey"] = std::move(t);
  } else {
    j["tukey"] = nullptr;
  }
  j["notes"] = c.notes;
  return j.dump(2) + "\n";
}

std::string comparison_text(const WindowComparison& c) {
  std::ostringstream out;
  out << pad("window", 10) << pad("mean", 10) << "std\n";
  for (std::size_t i = 0; i < c.windows.size(); ++i)
    out << pad(detail::format_number(c.windows[i]) + " m", 10)
        << pad(fixed(c.reports[i].mean), 10) << fixed(c.reports[i].std) << '\n';
  if (c.anova) {
    out << "\nANOVA F = " << fixed(c.anova->F) << ", p = " << fixed(c.anova->p, 6) << " (df "
        << c.anova->df_between << ", " << c.anova->df_within << ")\n";
  }
  if (c.tukey) {
    out << "\nTukey HSD (* 0.05, ** 0.01, *** 0.001)\n";
    for (const auto& p : c.tukey->pairs)
      out << "  " << detail::format_number(c.windows[p.i]) << " m vs "
          << detail::format_number(c.windows[p.j]) << " m: diff " << fixed(p.mean_diff) << ", q "
          << (std::isfinite(p.q) ? fixed(p.q, 3) : "inf") << ' ' << marks(p.q, *c.tukey) << '\n';
  }
  for (const auto& n : c.notes) out << "note: " << n << '\n';
  return out.str();
}

std::string comparison_plot_csv(const WindowComparison& c) {
  std::ostringstream out;
  out << "window_minutes,mean,std,runs,marks\n";
  for (std::size_t i = 0; i < c.windows.size(); ++i) {
    std::string m;
    if (c.tukey)
      for (const auto& p : c.tukey->pairs) {
        if (p.i != i && p.j != i) continue;
        const auto s = marks(p.q, *c.tukey);
        if (s.empty()) continue;
        if (!m.empty()) m += ' ';
        m += detail::format_number(c.windows[p.i == i ? p.j : p.i]) + ":" + s;
      }
    out << detail::format_number(c.windows[i]) << ',' << detail::format_number(c.reports[i].mean)
        << ',' << detail::format_number(c.reports[i].std) << ',' << c.reports[i].runs.size() << ','
        << m << '\n';
  }
  return out.str();
}

}  // namespace wristmood
