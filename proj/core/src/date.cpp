#include "proxyrank/date.hpp"

#include <charconv>
#include <chrono>

#include <fmt/format.h>

#include "proxyrank/errors.hpp"

namespace proxyrank {

namespace chr = std::chrono;

namespace {

chr::year_month_day to_ymd(std::int64_t days) {
  return chr::year_month_day{chr::sys_days{chr::days{days}}};
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  if (text.empty()) return false;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

}  // namespace

Date::Date(int year, unsigned month, unsigned day) {
  const chr::year_month_day ymd{chr::year{year}, chr::month{month}, chr::day{day}};
  if (!ymd.ok()) throw InputError(fmt::format("invalid date {:04}-{:02}-{:02}", year, month, day));
  days_ = chr::sys_days{ymd}.time_since_epoch().count();
}

std::optional<Date> Date::try_parse(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  if (!parse_number(text.substr(0, 4), y) || !parse_number(text.substr(5, 2), m) ||
      !parse_number(text.substr(8, 2), d))
    return std::nullopt;
  const chr::year_month_day ymd{chr::year{y}, chr::month{m}, chr::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return Date(y, m, d);
}

Date Date::parse(std::string_view text) {
  if (auto d = try_parse(text)) return *d;
  throw InputError(fmt::format("expected an ISO date YYYY-MM-DD, got '{}'", text));
}

int Date::year() const { return static_cast<int>(to_ymd(days_).year()); }
unsigned Date::month() const { return static_cast<unsigned>(to_ymd(days_).month()); }
unsigned Date::day() const { return static_cast<unsigned>(to_ymd(days_).day()); }

std::string Date::iso() const { return fmt::format("{:04}-{:02}-{:02}", year(), month(), day()); }

Date Date::plus_months(int months) const {
  const auto ymd = to_ymd(days_);
  const chr::year_month shifted = chr::year_month{ymd.year(), ymd.month()} + chr::months{months};
  const auto last = chr::year_month_day_last{shifted.year(), chr::month_day_last{shifted.month()}};
  const chr::day day = std::min(ymd.day(), last.day());
  return Date(static_cast<int>(shifted.year()), static_cast<unsigned>(shifted.month()),
              static_cast<unsigned>(day));
}

double years_between(Date from, Date to) {
  return static_cast<double>(to.days() - from.days()) / 365.25;
}

YearRange YearRange::parse(std::string_view text) {
  YearRange r;
  const auto dash = text.find('-');
  const bool ok = dash == std::string_view::npos
                      ? parse_number(text, r.first) && (r.last = r.first, true)
                      : parse_number(text.substr(0, dash), r.first) &&
                            parse_number(text.substr(dash + 1), r.last);
  if (!ok || r.empty()) throw InputError(fmt::format("invalid year range '{}'", text));
  return r;
}

std::string YearRange::to_string() const {
  return first == last ? fmt::format("{}", first) : fmt::format("{}-{}", first, last);
}

}  // namespace proxyrank
