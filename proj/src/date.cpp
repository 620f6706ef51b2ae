#include "epiforecast/date.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <stdexcept>

namespace epi {

namespace {

bool parse_int(std::string_view s, int* out) {
  if (s.empty()) return false;
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return false;
  *out = v;
  return true;
}

}  // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
  using namespace std::chrono;
  year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                     std::chrono::day{day}};
  if (!ymd.ok()) throw std::invalid_argument("invalid calendar date");
  sys_days sd{ymd};
  return Date(static_cast<int>(sd.time_since_epoch().count()));
}

bool Date::try_parse(std::string_view text, Date* out) {
  int y = 0, m = 0, d = 0;
  if (text.size() == 10 && (text[4] == '-' || text[4] == '/') &&
      (text[7] == '-' || text[7] == '/')) {
    if (!parse_int(text.substr(0, 4), &y) || !parse_int(text.substr(5, 2), &m) ||
        !parse_int(text.substr(8, 2), &d))
      return false;
  } else if (text.size() == 8) {
    if (!parse_int(text.substr(0, 4), &y) || !parse_int(text.substr(4, 2), &m) ||
        !parse_int(text.substr(6, 2), &d))
      return false;
  } else {
    return false;
  }
  using namespace std::chrono;
  year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                     std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) return false;
  *out = Date(static_cast<int>(sys_days{ymd}.time_since_epoch().count()));
  return true;
}

Date Date::parse(std::string_view text) {
  Date d;
  if (!try_parse(text, &d))
    throw std::invalid_argument("unparseable date: '" + std::string(text) + "'");
  return d;
}

std::string Date::to_string() const {
  using namespace std::chrono;
  year_month_day ymd{sys_days{days{days_}}};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

}  // namespace epi
