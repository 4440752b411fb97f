#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace proxyrank {

// Calendar date (proleptic Gregorian), stored as days since 1970-01-01.
class Date {
 public:
  Date() = default;
  Date(int year, unsigned month, unsigned day);

  static Date from_days(std::int64_t days) { Date d; d.days_ = days; return d; }
  // Accepts YYYY-MM-DD only. Throws InputError on anything else.
  static Date parse(std::string_view text);
  static std::optional<Date> try_parse(std::string_view text);

  std::int64_t days() const noexcept { return days_; }
  int year() const;
  unsigned month() const;
  unsigned day() const;
  std::string iso() const;

  // Calendar month arithmetic; the day is clamped to the target month's length.
  Date plus_months(int months) const;

  auto operator<=>(const Date&) const = default;

 private:
  std::int64_t days_ = 0;
};

// Fractional years between two dates (365.25-day years).
double years_between(Date from, Date to);

// Inclusive range of publication years.
struct YearRange {
  int first = 0;
  int last = 0;

  // "2004" or "2004-2006". Throws InputError.
  static YearRange parse(std::string_view text);

  bool contains(int year) const noexcept { return year >= first && year <= last; }
  int size() const noexcept { return last >= first ? last - first + 1 : 0; }
  bool empty() const noexcept { return last < first; }
  Date end_date() const { return Date(last, 12, 31); }
  std::string to_string() const;

  auto operator<=>(const YearRange&) const = default;
};

}  // namespace proxyrank
