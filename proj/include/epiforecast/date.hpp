#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace epi {

// Calendar day stored as days since 1970-01-01.
class Date {
 public:
  Date() = default;
  static Date from_days(int days) { return Date(days); }
  static Date from_ymd(int year, unsigned month, unsigned day);
  // Accepts YYYY-MM-DD, YYYY/MM/DD and YYYYMMDD.
  static Date parse(std::string_view text);
  static bool try_parse(std::string_view text, Date* out);

  std::string to_string() const;  // YYYY-MM-DD
  int days_since_epoch() const { return days_; }

  friend Date operator+(Date d, int days) { return Date(d.days_ + days); }
  friend Date operator-(Date d, int days) { return Date(d.days_ - days); }
  friend int operator-(Date a, Date b) { return a.days_ - b.days_; }
  Date& operator++() {
    ++days_;
    return *this;
  }
  auto operator<=>(const Date&) const = default;

 private:
  explicit Date(int days) : days_(days) {}
  int days_ = 0;
};

}  // namespace epi
