#include <fstream>
#include <sstream>

#include "numfmt.hpp"
#include "wristmood/error.hpp"
#include "wristmood/pipeline.hpp"

namespace wristmood {

namespace {

constexpr const char* kLabelColumns[] = {"mood", "happiness", "activeness", "source_ema", "day"};

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void write_header(std::ostream& out, bool labeled) {
  out << "window_start,window_end";
  for (const auto& name : FeatureRegistry::instance().names()) out << ',' << name;
  if (labeled)
    for (const char* c : kLabelColumns) out << ',' << c;
  out << '\n';
}

void write_window(std::ostream& out, const FeatureWindow& w) {
  if (w.values.size() != kFeatureCount)
    fail(ErrorCode::kDimensionMismatch, "feature window without a full vector");
  out << detail::format_number(w.start) << ',' << detail::format_number(w.end);
  for (double v : w.values) out << ',' << detail::format_number(v);
}

void check_header(const std::string& line, bool labeled) {
  std::ostringstream expected;
  write_header(expected, labeled);
  std::string want = expected.str();
  want.pop_back();
  std::string got = line;
  if (!got.empty() && got.back() == '\r') got.pop_back();
  if (got != want)
    fail(ErrorCode::kMalformedHeader,
         labeled ? "not a labeled feature table" : "not a feature table");
}

double number_at(const std::vector<std::string>& cells, std::size_t i, std::size_t row) {
  auto v = detail::parse_number(cells[i]);
  if (!v)
    fail(ErrorCode::kNonNumericSample,
         "row " + std::to_string(row) + ", column " + std::to_string(i + 1) + ": '" + cells[i] + "'");
  return *v;
}

FeatureWindow window_from(const std::vector<std::string>& cells, std::size_t row) {
  FeatureWindow w;
  w.start = number_at(cells, 0, row);
  w.end = number_at(cells, 1, row);
  w.values.reserve(kFeatureCount);
  for (std::size_t i = 0; i < kFeatureCount; ++i) w.values.push_back(number_at(cells, i + 2, row));
  w.channel_valid.fill(true);
  return w;
}

template <typename RowFn>
void read_rows(std::istream& in, bool labeled, RowFn&& fn) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::kMalformedHeader, "empty table");
  check_header(line, labeled);
  const std::size_t width = 2 + kFeatureCount + (labeled ? std::size(kLabelColumns) : 0);
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_row(line);
    if (cells.size() != width)
      fail(ErrorCode::kDimensionMismatch, "row " + std::to_string(row) + " has " +
                                              std::to_string(cells.size()) + " columns, expected " +
                                              std::to_string(width));
    fn(cells, row);
  }
}

}  // namespace

void write_feature_table(std::ostream& out, std::span<const FeatureWindow> windows) {
  write_header(out, false);
  for (const auto& w : windows) {
    write_window(out, w);
    out << '\n';
  }
}

std::vector<FeatureWindow> read_feature_table(std::istream& in) {
  std::vector<FeatureWindow> out;
  read_rows(in, false, [&](const auto& cells, std::size_t row) {
    out.push_back(window_from(cells, row));
  });
  return out;
}

void write_labeled_table(std::ostream& out, std::span<const LabeledExample> examples) {
  write_header(out, true);
  for (const auto& e : examples) {
    write_window(out, e.features);
    out << ',' << to_string(e.mood) << ',' << e.happiness << ',' << e.activeness << ','
        << e.source_ema << ',' << e.day << '\n';
  }
}

std::vector<LabeledExample> read_labeled_table(std::istream& in) {
  std::vector<LabeledExample> out;
  read_rows(in, true, [&](const auto& cells, std::size_t row) {
    LabeledExample e;
    e.features = window_from(cells, row);
    const std::size_t base = 2 + kFeatureCount;
    auto mood = mood_from_string(cells[base]);
    if (!mood) fail(ErrorCode::kInvalidArgument, "row " + std::to_string(row) + ": unknown mood '" + cells[base] + "'");
    e.mood = *mood;
    e.happiness = static_cast<int>(number_at(cells, base + 1, row));
    e.activeness = static_cast<int>(number_at(cells, base + 2, row));
    validate_likert(e.happiness, e.activeness);
    e.source_ema = static_cast<std::int64_t>(number_at(cells, base + 3, row));
    e.day = cells[base + 4];
    out.push_back(std::move(e));
  });
  return out;
}

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot read " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

}  // namespace

std::vector<FeatureWindow> read_feature_table(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_feature_table(in);
}

std::vector<LabeledExample> read_labeled_table(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_labeled_table(in);
}

void write_feature_table(const std::filesystem::path& path, std::span<const FeatureWindow> windows) {
  auto out = open_out(path);
  write_feature_table(out, windows);
  if (!out) fail(ErrorCode::kIo, "write error on " + path.string());
}

void write_labeled_table(const std::filesystem::path& path,
                         std::span<const LabeledExample> examples) {
  auto out = open_out(path);
  write_labeled_table(out, examples);
  if (!out) fail(ErrorCode::kIo, "write error on " + path.string());
}

}  // namespace wristmood
