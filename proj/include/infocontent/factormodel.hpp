#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "infocontent/date.hpp"

namespace infocontent::factormodel {

// Value per calendar date.
using DatedSeries = std::map<Date, double>;

// CSV `date,<value_column>`; duplicate dates are rejected.
DatedSeries load_dated_series(const std::filesystem::path& path, const std::string& value_column);

struct PanelRow {
  std::string firm_id;
  Date date;
  double daily_return = 0.0;  // simple return
  // Capitalization used to weight this day's return (previous close), and the
  // size characteristic on a rebalance date.
  double market_cap = 0.0;
  std::string exchange;
  double book_equity = 0.0;
  double operating_income = 0.0;
  double total_assets = 0.0;
  double total_assets_prior = 0.0;
};

// Daily security rows indexed by (firm, trading date). The trading calendar is
// the set of distinct row dates.
class SecurityPanel {
 public:
  SecurityPanel() = default;
  // Throws InvalidArgument on duplicate (firm, date), market_cap <= 0 or
  // daily_return <= -1.
  explicit SecurityPanel(std::vector<PanelRow> rows);

  const TradingCalendar& calendar() const { return calendar_; }
  const std::vector<std::string>& firms() const { return firms_; }  // ascending
  std::size_t row_count() const { return rows_.size(); }

  // Rows on calendar date index `d`, ascending firm id.
  std::vector<const PanelRow*> rows_on(std::size_t d) const;
  const PanelRow* find(std::size_t firm, std::size_t d) const;
  std::optional<std::size_t> firm_index(const std::string& firm_id) const;

 private:
  std::vector<PanelRow> rows_;  // sorted by (date, firm)
  std::vector<std::size_t> date_offsets_;
  std::vector<std::string> firms_;
  std::map<std::string, std::size_t> firm_lookup_;
  std::vector<std::int32_t> cell_;  // firm * ndates + date -> row, -1 if absent
  TradingCalendar calendar_;
};

// CSV `firm_id,date,daily_return,market_cap,exchange,book_equity,
// operating_income,total_assets,total_assets_prior`.
SecurityPanel load_panel(const std::filesystem::path& path);

struct FactorDay {
  double rmrf = 0.0;
  double smb = 0.0;
  double hml = 0.0;
  double rmw = 0.0;
  double cma = 0.0;
  double rf = 0.0;

  // rmrf, smb, hml, rmw, cma
  std::array<double, 5> factors() const { return {rmrf, smb, hml, rmw, cma}; }
};

inline constexpr std::array<const char*, 5> kFactorNames = {"rmrf", "smb", "hml", "rmw", "cma"};

struct FactorSeries {
  TradingCalendar calendar;
  std::vector<FactorDay> days;  // parallel to calendar

  std::optional<std::size_t> index_of(const Date& d) const { return calendar.index_of(d); }
};

// CSV `date,rmrf,smb,hml,rmw,cma,rf`.
FactorSeries load_factors(const std::filesystem::path& path);
void write_factors_csv(std::ostream& out, const FactorSeries& f);

struct FactorConfig {
  std::string main_exchange = "main";  // breakpoints come from this exchange only
  unsigned rebalance_month = 7;        // first trading day on or after month/day
  unsigned rebalance_day = 1;
};

enum class SortDimension { kBookToMarket, kProfitability, kInvestment };

// Portfolio returns behind one 2x3 sort on one trading date. Index
// [size][bucket]: size 0 small / 1 big, bucket 0 low / 1 neutral / 2 high
// characteristic. nullopt when the portfolio has no constituents that day.
using SortReturns = std::array<std::array<std::optional<double>, 3>, 2>;

struct FactorConstruction {
  FactorSeries series;
  std::vector<Date> rebalance_dates;
  // Per date, per dimension (B/M, OP, Inv): the six portfolio returns.
  std::vector<std::array<SortReturns, 3>> portfolios;
  // Long/short spreads that had an empty leg and were set to zero.
  std::size_t degenerate_spreads = 0;
};

// Five-factor construction with 2x3 sorts. Size breakpoint is the median
// market cap of main-exchange stocks; characteristic breakpoints are the
// 30th/70th percentiles of main-exchange stocks; all stocks are sorted.
// Portfolios are value weighted and rebalanced annually. The covered range
// runs from the first rebalance date to the end of the panel.
//   B/M = book_equity / market_cap       (book_equity > 0)
//   OP  = operating_income / book_equity (book_equity > 0)
//   Inv = total_assets / total_assets_prior - 1 (prior > 0); CMA is long low Inv.
// Throws InvalidArgument when a rebalance date has fewer than 6 main-exchange
// stocks, when no rebalance date is covered, or when rf is missing a date.
FactorConstruction construct_factors(const SecurityPanel& panel, const DatedSeries& rf,
                                     const FactorConfig& config = {});

// Linear-interpolation percentile (p in [0,1]) of unsorted values.
double percentile(std::vector<double> values, double p);

// Share of firms with a row on `date` whose return is exactly zero.
double compute_pct_zero(const SecurityPanel& panel, const Date& date);

struct ControlDay {
  std::optional<double> pct_zero;
  std::optional<double> short_rate;
  std::optional<double> nsi;
  std::optional<double> d_nsi;  // nsi(t) - nsi(previous trading date)
};

struct ControlSeries {
  TradingCalendar calendar;
  std::vector<ControlDay> days;

  std::optional<std::size_t> index_of(const Date& d) const { return calendar.index_of(d); }
};

// Aligns control inputs to `calendar`. Input dates that are not trading dates
// are ignored. Every trading date in [sample_first, sample_last] must carry
// NSI and short rate, else InvalidArgument listing the gaps. pct_zero may be
// empty (left undefined).
ControlSeries build_controls(const TradingCalendar& calendar, const DatedSeries& nsi,
                             const DatedSeries& short_rate, const DatedSeries& pct_zero,
                             const Date& sample_first, const Date& sample_last);

// Reads `date,nsi` and `date,short_rate`; pct_zero comes from the panel when given.
ControlSeries load_controls(const std::filesystem::path& nsi_path,
                            const std::filesystem::path& short_rate_path,
                            const TradingCalendar& calendar, const SecurityPanel* panel,
                            const Date& sample_first, const Date& sample_last);

// `date,pct_zero,short_rate,nsi,d_nsi`, undefined cells empty.
void write_controls_csv(std::ostream& out, const ControlSeries& c);
ControlSeries read_controls_csv(const std::filesystem::path& path);

}  // namespace infocontent::factormodel
