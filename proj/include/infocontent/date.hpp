#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace infocontent {

// Calendar date without time of day.
class Date {
 public:
  Date() = default;
  explicit Date(std::chrono::sys_days days) : days_(days) {}
  Date(int y, unsigned m, unsigned d);

  // Strict YYYY-MM-DD. Returns nullopt for anything else, including
  // out-of-range months and days.
  static std::optional<Date> parse(std::string_view text);

  std::string iso() const;
  std::chrono::sys_days days() const { return days_; }
  std::chrono::year_month_day ymd() const { return std::chrono::year_month_day{days_}; }
  bool is_weekend() const;

  Date plus_days(int n) const { return Date{days_ + std::chrono::days{n}}; }
  int days_since(const Date& other) const { return static_cast<int>((days_ - other.days_).count()); }

  friend auto operator<=>(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days days_{};
};

// Sorted, duplicate-free list of trading dates.
class TradingCalendar {
 public:
  TradingCalendar() = default;
  explicit TradingCalendar(std::vector<Date> dates);  // sorts and dedups

  std::size_t size() const { return dates_.size(); }
  bool empty() const { return dates_.empty(); }
  const Date& operator[](std::size_t i) const { return dates_[i]; }
  const std::vector<Date>& dates() const { return dates_; }

  std::optional<std::size_t> index_of(const Date& d) const;
  // Index of the first trading date on or after d.
  std::optional<std::size_t> index_on_or_after(const Date& d) const;

 private:
  std::vector<Date> dates_;
};

}  // namespace infocontent
