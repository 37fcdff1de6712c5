#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "wristmood/error.hpp"
#include "wristmood/eval.hpp"

namespace wristmood {
namespace {

// Examples whose first 40 features shift with the mood.
std::vector<LabeledExample> fake_examples(const std::vector<std::pair<MoodLabel, int>>& counts,
                                          int days, double spread, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, spread);
  std::vector<LabeledExample> out;
  int k = 0;
  for (auto [mood, n] : counts)
    for (int i = 0; i < n; ++i, ++k) {
      LabeledExample e;
      e.mood = mood;
      e.happiness = static_cast<int>(mood) % 5;
      e.activeness = 2;
      e.source_ema = k / 10;
      e.day = "2019-04-0" + std::to_string(1 + k % days);
      e.features.start = 60.0 * k;
      e.features.end = e.features.start + 60.0;
      e.features.channel_valid = {true, true, true, true};
      e.features.values.resize(kFeatureCount);
      for (std::size_t f = 0; f < kFeatureCount; ++f)
        e.features.values[f] = g(rng) + (f < 40 ? 2.0 * static_cast<double>(mood) : 0.0);
      out.push_back(std::move(e));
    }
  return out;
}

EvalOptions small_options(std::uint64_t seed) {
  EvalOptions o;
  o.seed = seed;
  o.repeats = 3;
  o.grid.c_exponents = {-1, 3};
  o.grid.gamma_exponents = {-7, -3};
  o.grid.folds = 3;
  return o;
}

const std::vector<std::pair<MoodLabel, int>> kThree = {
    {MoodLabel::kPleasure, 20}, {MoodLabel::kMisery, 20}, {MoodLabel::kSleepiness, 20}};

TEST(Split, IndicesPartition) {
  const auto s = random_split(10, 0.75, 1, 0);
  EXPECT_EQ(s.train.size(), 8u);
  EXPECT_EQ(s.test.size(), 2u);
  std::vector<std::size_t> all = s.train;
  all.insert(all.end(), s.test.begin(), s.test.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(all[i], i);
  EXPECT_EQ(random_split(10, 0.75, 1, 0).train, s.train);
  EXPECT_THROW(random_split(10, 1.0, 1, 0), Error);
}

TEST(EvalSplit, SingleRepeatMatchesManualFit) {
  const auto examples = fake_examples(kThree, 3, 1.0, 2);
  auto o = small_options(21);
  o.repeats = 1;
  const auto report = eval_split(examples, o);
  ASSERT_EQ(report.runs.size(), 1u);

  const auto s = random_split(examples.size(), 0.75, 21, report.runs[0].stream);
  const auto x = feature_matrix(examples);
  const auto y = target_labels(examples, Target::kMood);
  std::vector<int> ytr;
  for (auto i : s.train) ytr.push_back(y[i]);
  auto grid = o.grid;
  grid.seed = 21;
  const auto model = svm::fit_with_grid_search(x.select(s.train), ytr, grid);
  std::size_t correct = 0;
  for (auto i : s.test) correct += model.predict(x.row(i)) == y[i];
  EXPECT_DOUBLE_EQ(report.runs[0].accuracy, static_cast<double>(correct) / s.test.size());
  EXPECT_EQ(report.runs[0].C, model.C);
  EXPECT_EQ(report.runs[0].gamma, model.gamma);
  EXPECT_EQ(report.std, 0.0);
}

TEST(EvalSplit, ConfusionInvariantsAndSeparable) {
  const auto examples = fake_examples(kThree, 3, 0.5, 3);
  const auto report = eval_split(examples, small_options(5));
  ASSERT_EQ(report.runs.size(), 3u);
  std::size_t total = 0, diag = 0, tested = 0;
  for (std::size_t i = 0; i < report.confusion.size(); ++i)
    for (std::size_t j = 0; j < report.confusion.size(); ++j) {
      total += report.confusion[i][j];
      if (i == j) diag += report.confusion[i][j];
    }
  for (const auto& r : report.runs) tested += r.test_size;
  EXPECT_EQ(total, tested);
  EXPECT_EQ(report.classes.size(), 3u);
  EXPECT_EQ(report.class_names[0], "Pleasure");
  double sum = 0;
  for (const auto& r : report.runs) sum += r.accuracy;
  EXPECT_NEAR(report.mean, sum / 3.0, 1e-12);
  EXPECT_NEAR(static_cast<double>(diag) / total, report.mean, 1e-12);  // equal test sizes
  EXPECT_GE(report.mean, 0.95);
}

TEST(EvalSplit, RareMoodDroppedAndDeterministic) {
  auto counts = kThree;
  counts.push_back({MoodLabel::kArousal, 3});
  const auto examples = fake_examples(counts, 3, 1.0, 4);
  const auto a = eval_split(examples, small_options(9));
  const auto b = eval_split(examples, small_options(9));
  ASSERT_EQ(a.dropped_moods.size(), 1u);
  EXPECT_EQ(a.dropped_moods[0], "Arousal");
  EXPECT_EQ(report_json(a), report_json(b));
  EXPECT_EQ(report_text(a), report_text(b));
  const auto csv = report_plot_csv(a);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(EvalSplit, SingleClassRejected) {
  const auto examples = fake_examples({{MoodLabel::kPleasure, 30}, {MoodLabel::kMisery, 2}}, 2, 1.0, 5);
  try {
    eval_split(examples, small_options(1));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingleClass);
  }
}

TEST(ShuffleLabels, PermutesJointly) {
  const auto examples = fake_examples(kThree, 3, 1.0, 6);
  const auto shuffled = shuffle_labels(examples, 3);
  std::map<MoodLabel, int> before, after;
  for (const auto& e : examples) ++before[e.mood];
  int moved = 0;
  for (std::size_t i = 0; i < shuffled.size(); ++i) {
    ++after[shuffled[i].mood];
    EXPECT_EQ(shuffled[i].happiness, static_cast<int>(shuffled[i].mood) % 5);
    EXPECT_EQ(shuffled[i].features.values, examples[i].features.values);
    moved += shuffled[i].mood != examples[i].mood;
  }
  EXPECT_EQ(before, after);
  EXPECT_GT(moved, 10);
}

TEST(EvalLodo, RunsPerDayAndSkips) {
  const auto examples = fake_examples(kThree, 3, 0.5, 7);
  const auto report = eval_lodo(examples, small_options(2));
  ASSERT_EQ(report.runs.size(), 3u);
  EXPECT_EQ(report.runs[0].name, "2019-04-01");
  EXPECT_EQ(report.protocol, "lodo");

  // a mood present on one day only makes that day unusable as a test day
  auto skewed = fake_examples(kThree, 3, 0.5, 8);
  auto extra = fake_examples({{MoodLabel::kDistress, 20}}, 1, 0.5, 9);
  for (auto& e : extra) {
    e.day = "2019-04-09";
    skewed.push_back(std::move(e));
  }
  const auto r2 = eval_lodo(skewed, small_options(2));
  EXPECT_EQ(r2.runs.size(), 3u);
  bool noted = false;
  for (const auto& n : r2.notes) noted |= n.find("skipped day 2019-04-09") != std::string::npos;
  EXPECT_TRUE(noted);

  const auto one_day = fake_examples(kThree, 1, 0.5, 10);
  try {
    eval_lodo(one_day, small_options(2));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewDays);
  }
}

TEST(Targets, NamesAndLabels) {
  EXPECT_EQ(target_from_string("happiness"), Target::kHappiness);
  EXPECT_FALSE(target_from_string("valence").has_value());
  EXPECT_EQ(class_name(Target::kMood, 4), "Misery");
  EXPECT_EQ(class_name(Target::kActiveness, 3), "3");
}

}  // namespace
}  // namespace wristmood
