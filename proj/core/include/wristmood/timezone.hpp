#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace wristmood {

/// Calendar date, ordered and printable as ISO-8601 (YYYY-MM-DD).
using Date = std::chrono::year_month_day;

std::string to_iso(Date date);

/// A fixed UTC offset used to decide which calendar day an instant falls on.
/// Accepts "UTC", "Z", "+HH:MM", "-HHMM", "+H" and "UTC+02:00" style strings.
class TimeZone {
 public:
  TimeZone() = default;
  static TimeZone parse(std::string_view text);
  static TimeZone utc() { return TimeZone{}; }

  std::chrono::seconds offset() const { return offset_; }
  std::string name() const;

  Date date_of(double unix_seconds) const;
  /// Half-open [start, end) of the given local calendar day, in unix seconds.
  std::pair<double, double> day_bounds(Date date) const;

  friend bool operator==(const TimeZone&, const TimeZone&) = default;

 private:
  explicit TimeZone(std::chrono::seconds offset) : offset_(offset) {}
  std::chrono::seconds offset_{0};
};

}  // namespace wristmood
