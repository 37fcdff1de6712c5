#include "wristmood/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "wristmood/error.hpp"

namespace wristmood {

namespace fs = std::filesystem;

std::string_view to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::kAccX: return "AccX";
    case ChannelKind::kAccY: return "AccY";
    case ChannelKind::kAccZ: return "AccZ";
    case ChannelKind::kTemp: return "Temp";
    case ChannelKind::kEda: return "Eda";
    case ChannelKind::kHr: return "Hr";
    case ChannelKind::kBvp: return "Bvp";
  }
  return "?";
}

const ChannelSeries& SessionRecording::channel(ChannelKind kind) const {
  auto it = channels.find(kind);
  if (it == channels.end())
    fail(ErrorCode::kMissingChannel, std::string(to_string(kind)) + " in session '" +
                                         session_id + "'");
  return it->second;
}

double SessionRecording::earliest_start() const {
  double t = std::numeric_limits<double>::infinity();
  for (const auto& [kind, ch] : channels) t = std::min(t, ch.start_time);
  return t;
}

double SessionRecording::latest_end() const {
  double t = -std::numeric_limits<double>::infinity();
  for (const auto& [kind, ch] : channels) t = std::max(t, ch.end_time());
  return t;
}

Date SessionRecording::day(const TimeZone& tz) const { return tz.date_of(earliest_start()); }

bool SessionRecording::feature_extractable() const {
  for (auto k : {ChannelKind::kAccX, ChannelKind::kAccY, ChannelKind::kAccZ, ChannelKind::kTemp,
                 ChannelKind::kEda, ChannelKind::kHr})
    if (!has(k)) return false;
  return true;
}

void validate_likert(int happiness, int activeness) {
  auto check = [](int v, const char* name) {
    if (v < kLikertMin || v > kLikertMax)
      fail(ErrorCode::kLikertOutOfRange,
           std::string(name) + " = " + std::to_string(v) + " (expected 0..4)");
  };
  check(happiness, "happiness");
  check(activeness, "activeness");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto comma = line.find(',', pos);
    out.push_back(trim(line.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (in.bad()) fail(ErrorCode::kIo, "read error on " + path.string());
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

std::string where(const fs::path& path, std::size_t row) {
  return path.filename().string() + " row " + std::to_string(row + 1);
}

// Header row: one value per column, all equal.
double header_value(const fs::path& path, const std::vector<std::string>& lines, std::size_t row,
                    std::size_t columns) {
  if (lines.size() <= row) fail(ErrorCode::kMalformedHeader, where(path, row) + " missing");
  auto fields = split_commas(lines[row]);
  if (fields.size() != columns)
    fail(ErrorCode::kMalformedHeader, where(path, row) + ": expected " +
                                          std::to_string(columns) + " column(s)");
  auto first = to_double(fields[0]);
  if (!first || !std::isfinite(*first))
    fail(ErrorCode::kMalformedHeader, where(path, row) + ": not a number");
  for (std::size_t c = 1; c < fields.size(); ++c) {
    auto v = to_double(fields[c]);
    if (!v || *v != *first)
      fail(ErrorCode::kMalformedHeader, where(path, row) + ": columns disagree");
  }
  return *first;
}

double header_rate(const fs::path& path, const std::vector<std::string>& lines,
                   std::size_t columns) {
  const double rate = header_value(path, lines, 1, columns);
  if (!(rate > 0.0))
    fail(ErrorCode::kMalformedHeader, where(path, 1) + ": sample rate must be positive");
  return rate;
}

double sample_at(const fs::path& path, std::string_view field, std::size_t row) {
  auto v = to_double(field);
  if (!v || !std::isfinite(*v))
    fail(ErrorCode::kNonNumericSample, where(path, row) + ": '" + std::string(field) + "'");
  return *v;
}

ChannelSeries parse_single(const fs::path& path, ChannelKind kind) {
  auto lines = read_lines(path);
  ChannelSeries ch;
  ch.kind = kind;
  ch.start_time = header_value(path, lines, 0, 1);
  ch.sample_rate = header_rate(path, lines, 1);
  ch.samples.reserve(lines.size() > 2 ? lines.size() - 2 : 0);
  for (std::size_t r = 2; r < lines.size(); ++r) {
    auto fields = split_commas(lines[r]);
    if (fields.size() != 1)
      fail(ErrorCode::kNonNumericSample, where(path, r) + ": expected one value");
    ch.samples.push_back(sample_at(path, fields[0], r));
  }
  return ch;
}

void parse_acc(const fs::path& path, SessionRecording& rec) {
  auto lines = read_lines(path);
  const double start = header_value(path, lines, 0, 3);
  const double rate = header_rate(path, lines, 3);
  ChannelSeries axes[3];
  const ChannelKind kinds[3] = {ChannelKind::kAccX, ChannelKind::kAccY, ChannelKind::kAccZ};
  for (int a = 0; a < 3; ++a) {
    axes[a].kind = kinds[a];
    axes[a].start_time = start;
    axes[a].sample_rate = rate;
    axes[a].samples.reserve(lines.size());
  }
  for (std::size_t r = 2; r < lines.size(); ++r) {
    auto fields = split_commas(lines[r]);
    if (fields.size() != 3)
      fail(ErrorCode::kBadAccRow, where(path, r) + ": expected exactly 3 columns");
    for (int a = 0; a < 3; ++a) axes[a].samples.push_back(sample_at(path, fields[a], r));
  }
  for (auto& ax : axes) rec.channels.emplace(ax.kind, std::move(ax));
}

void parse_ibi(const fs::path& path, SessionRecording& rec) {
  auto lines = read_lines(path);
  if (lines.empty()) fail(ErrorCode::kMalformedHeader, where(path, 0) + " missing");
  auto head = split_commas(lines[0]);
  auto start = to_double(head[0]);
  if (!start) fail(ErrorCode::kMalformedHeader, where(path, 0) + ": not a number");
  rec.ibi_start = *start;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto fields = split_commas(lines[r]);
    if (fields.size() != 2)
      fail(ErrorCode::kNonNumericSample, where(path, r) + ": expected offset,duration");
    rec.ibi.push_back({sample_at(path, fields[0], r), sample_at(path, fields[1], r)});
  }
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorCode::kIo, "write error on " + path.string());
}

std::string single_channel_text(const ChannelSeries& ch) {
  std::string text;
  text.reserve(ch.samples.size() * 8 + 64);
  text += format_number(ch.start_time) + "\n" + format_number(ch.sample_rate) + "\n";
  for (double v : ch.samples) {
    text += format_number(v);
    text += '\n';
  }
  return text;
}

struct SingleFile {
  const char* name;
  ChannelKind kind;
  bool required;
};

constexpr SingleFile kSingleFiles[] = {
    {"TEMP.csv", ChannelKind::kTemp, true},
    {"EDA.csv", ChannelKind::kEda, true},
    {"HR.csv", ChannelKind::kHr, true},
    {"BVP.csv", ChannelKind::kBvp, false},
};

}  // namespace

SessionRecording parse_session(const fs::path& dir) {
  if (!fs::is_directory(dir)) fail(ErrorCode::kIo, "not a directory: " + dir.string());
  SessionRecording rec;
  rec.session_id = dir.filename().empty() ? dir.parent_path().filename().string()
                                          : dir.filename().string();

  if (!fs::exists(dir / "ACC.csv")) fail(ErrorCode::kMissingChannel, "AccX (ACC.csv)");
  for (const auto& f : kSingleFiles)
    if (f.required && !fs::exists(dir / f.name))
      fail(ErrorCode::kMissingChannel, std::string(to_string(f.kind)) + " (" + f.name + ")");

  parse_acc(dir / "ACC.csv", rec);
  for (const auto& f : kSingleFiles) {
    if (!fs::exists(dir / f.name)) continue;
    rec.channels.emplace(f.kind, parse_single(dir / f.name, f.kind));
  }
  if (fs::exists(dir / "IBI.csv")) parse_ibi(dir / "IBI.csv", rec);

  for (const auto& [kind, ch] : rec.channels) {
    if (ch.samples.empty()) {
      if (kind == ChannelKind::kBvp) {
        rec.warnings.push_back("BVP.csv has no samples");
        continue;
      }
      fail(ErrorCode::kSignalTooShort, std::string(to_string(kind)) + " has no samples");
    }
  }
  const auto& eda = rec.channels.at(ChannelKind::kEda).samples;
  if (std::any_of(eda.begin(), eda.end(), [](double v) { return v < 0.0; }))
    rec.warnings.push_back("EDA contains negative values");
  return rec;
}

void write_session(const fs::path& dir, const SessionRecording& rec) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());

  const auto& x = rec.channel(ChannelKind::kAccX);
  const auto& y = rec.channel(ChannelKind::kAccY);
  const auto& z = rec.channel(ChannelKind::kAccZ);
  if (y.samples.size() != x.samples.size() || z.samples.size() != x.samples.size() ||
      y.start_time != x.start_time || z.start_time != x.start_time ||
      y.sample_rate != x.sample_rate || z.sample_rate != x.sample_rate)
    fail(ErrorCode::kDimensionMismatch, "ACC axes are not aligned");
  {
    const std::string t = format_number(x.start_time);
    const std::string r = format_number(x.sample_rate);
    std::string text = t + "," + t + "," + t + "\n" + r + "," + r + "," + r + "\n";
    text.reserve(x.samples.size() * 12);
    for (std::size_t i = 0; i < x.samples.size(); ++i) {
      text += format_number(x.samples[i]);
      text += ',';
      text += format_number(y.samples[i]);
      text += ',';
      text += format_number(z.samples[i]);
      text += '\n';
    }
    write_text(dir / "ACC.csv", text);
  }
  for (const auto& f : kSingleFiles) {
    if (!rec.has(f.kind)) continue;
    write_text(dir / f.name, single_channel_text(rec.channel(f.kind)));
  }
  if (rec.ibi_start) {
    std::string text = format_number(*rec.ibi_start) + ",IBI\n";
    for (const auto& e : rec.ibi)
      text += format_number(e.offset_seconds) + "," + format_number(e.duration_seconds) + "\n";
    write_text(dir / "IBI.csv", text);
  }
}

EmaEntry parse_ema_record(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::kInvalidArgument, std::string("malformed EMA record: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::kInvalidArgument, "EMA record must be a JSON object");
  auto integer = [&](const char* key) -> std::int64_t {
    auto it = j.find(key);
    if (it == j.end()) fail(ErrorCode::kMissingField, key);
    if (it->is_number_integer()) return it->get<std::int64_t>();
    if (it->is_number_float()) {
      const double v = it->get<double>();
      if (std::isfinite(v) && v == std::floor(v)) return static_cast<std::int64_t>(v);
    }
    fail(ErrorCode::kInvalidArgument, std::string(key) + " must be an integer");
  };
  EmaEntry e;
  e.scheduled_at = integer("scheduled_at");
  e.answered_at = integer("answered_at");
  const auto h = integer("happiness");
  const auto a = integer("activeness");
  if (h < kLikertMin || h > kLikertMax || a < kLikertMin || a > kLikertMax)
    validate_likert(static_cast<int>(std::clamp<std::int64_t>(h, -1000, 1000)),
                    static_cast<int>(std::clamp<std::int64_t>(a, -1000, 1000)));
  e.happiness = static_cast<int>(h);
  e.activeness = static_cast<int>(a);
  return e;
}

std::string format_ema_record(const EmaEntry& e) {
  nlohmann::ordered_json j;
  j["scheduled_at"] = e.scheduled_at;
  j["answered_at"] = e.answered_at;
  j["happiness"] = e.happiness;
  j["activeness"] = e.activeness;
  return j.dump();
}

std::vector<EmaEntry> parse_ema_log(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<EmaEntry> entries;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    try {
      entries.push_back(parse_ema_record(line));
    } catch (const Error& e) {
      throw Error(e.code(), path.filename().string() + " line " + std::to_string(row) + ": " +
                                e.what());
    }
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const EmaEntry& a, const EmaEntry& b) { return a.answered_at < b.answered_at; });
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].answered_at == entries[i - 1].answered_at)
      fail(ErrorCode::kDuplicateEntry,
           "answered_at " + std::to_string(entries[i].answered_at) + " appears twice");
  return entries;
}

void write_ema_log(const fs::path& path, const std::vector<EmaEntry>& entries) {
  std::string text;
  for (const auto& e : entries) text += format_ema_record(e) + "\n";
  write_text(path, text);
}

DaySplit split_days(std::vector<EmaEntry> entries, std::vector<SessionRecording> recordings,
                    const TimeZone& tz) {
  DaySplit out;
  std::sort(recordings.begin(), recordings.end(),
            [](const SessionRecording& a, const SessionRecording& b) {
              return a.earliest_start() < b.earliest_start();
            });
  for (auto& rec : recordings) {
    const Date d = rec.day(tz);
    if (!out.bundles.empty() && out.bundles.back().day == d)
      fail(ErrorCode::kInvalidArgument, "two recordings on " + to_iso(d) + " ('" +
                                            out.bundles.back().recording.session_id + "', '" +
                                            rec.session_id + "')");
    out.bundles.push_back({d, std::move(rec), {}});
  }
  std::sort(entries.begin(), entries.end(),
            [](const EmaEntry& a, const EmaEntry& b) { return a.answered_at < b.answered_at; });
  for (const auto& e : entries) {
    const Date d = tz.date_of(static_cast<double>(e.answered_at));
    auto it = std::lower_bound(out.bundles.begin(), out.bundles.end(), d,
                               [](const DayBundle& b, Date day) { return b.day < day; });
    if (it != out.bundles.end() && it->day == d)
      it->emas.push_back(e);
    else
      out.orphans.push_back(e);
  }
  return out;
}

}  // namespace wristmood
