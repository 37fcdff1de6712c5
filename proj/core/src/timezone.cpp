#include "wristmood/timezone.hpp"

#include <cmath>
#include <cstdio>

#include "wristmood/error.hpp"

namespace wristmood {

std::string to_iso(Date date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

}  // namespace

TimeZone TimeZone::parse(std::string_view text) {
  std::string_view s = text;
  if (s == "UTC" || s == "Z" || s == "GMT" || s.empty()) return TimeZone{};
  if (s.starts_with("UTC") || s.starts_with("GMT")) s.remove_prefix(3);
  if (s.empty() || (s.front() != '+' && s.front() != '-'))
    fail(ErrorCode::kInvalidArgument, "unsupported time zone '" + std::string(text) +
                                          "' (expected UTC or a fixed offset like +02:00)");
  const int sign = s.front() == '-' ? -1 : 1;
  s.remove_prefix(1);
  std::string_view hh = s, mm;
  if (auto colon = s.find(':'); colon != std::string_view::npos) {
    hh = s.substr(0, colon);
    mm = s.substr(colon + 1);
  } else if (s.size() == 4) {
    hh = s.substr(0, 2);
    mm = s.substr(2);
  }
  if (!all_digits(hh) || (!mm.empty() && !all_digits(mm)))
    fail(ErrorCode::kInvalidArgument, "malformed time zone offset '" + std::string(text) + "'");
  const int hours = to_int(hh);
  const int minutes = mm.empty() ? 0 : to_int(mm);
  if (hours > 14 || minutes > 59)
    fail(ErrorCode::kInvalidArgument, "time zone offset out of range '" + std::string(text) + "'");
  return TimeZone{std::chrono::seconds{sign * (hours * 3600 + minutes * 60)}};
}

std::string TimeZone::name() const {
  const auto total = offset_.count();
  if (total == 0) return "UTC";
  const long long a = total < 0 ? -total : total;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%c%02lld:%02lld", total < 0 ? '-' : '+', a / 3600,
                (a % 3600) / 60);
  return buf;
}

Date TimeZone::date_of(double unix_seconds) const {
  const double local = unix_seconds + static_cast<double>(offset_.count());
  const auto day_index = static_cast<long long>(std::floor(local / 86400.0));
  return Date{std::chrono::sys_days{std::chrono::days{day_index}}};
}

std::pair<double, double> TimeZone::day_bounds(Date date) const {
  const auto day_index = std::chrono::sys_days{date}.time_since_epoch().count();
  const double start = static_cast<double>(day_index) * 86400.0 -
                       static_cast<double>(offset_.count());
  return {start, start + 86400.0};
}

}  // namespace wristmood
