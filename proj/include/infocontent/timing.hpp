#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "infocontent/date.hpp"
#include "infocontent/factormodel.hpp"
#include "infocontent/sentiment.hpp"

namespace infocontent::timing {

// Which observations form the comparison mean for S(N, t).
enum class WindowMode {
  kInclusive,  // the N observations ending at and including t
  kExclusive,  // the N observations strictly before t
};

// Binary sentiment signal keyed by content date.
struct SignalSeries {
  int n = 0;
  WindowMode mode = WindowMode::kInclusive;
  std::vector<Date> dates;
  std::vector<int> values;  // 0 or 1
  std::optional<Date> defined_from;
  std::vector<std::string> warnings;
};

// S(N, t) = 1 iff sentiment(t) exceeds the mean of its comparison window,
// strictly. Emitted only for observations with at least N predecessors.
// Observations with an undefined score are skipped.
SignalSeries build_signal(const std::vector<sentiment::SentimentObservation>& sentiment, int n,
                          WindowMode mode = WindowMode::kInclusive);

// Daily series on a trading calendar.
struct MarketSeries {
  TradingCalendar calendar;
  std::vector<double> values;
};

MarketSeries market_excess_return(const factormodel::FactorSeries& factors);

// Signal per trading date. Content dates that are not trading dates move to
// the next trading date; when several land on one trading date the latest
// content date wins. Dates past the calendar end are dropped.
std::vector<std::optional<int>> align_signal(const SignalSeries& signal, const TradingCalendar& calendar);

// Value at trading index i is aligned[i - lag]; undefined for i < lag.
std::vector<std::optional<int>> lag_signal(const std::vector<std::optional<int>>& aligned, int lag);

struct R2Row {
  int n = 0;
  int lag = 0;
  std::size_t n_obs = 0;
  std::optional<double> correlation;  // undefined when either side is constant
  std::optional<double> r2;
  int corr_sign = 0;  // -1, 0 or +1; 0 when undefined
};

double pearson(std::span<const double> x, std::span<const double> y);

// Pearson correlation between S(N, t - lag) and the market series at t over
// the dates where both exist.
R2Row r2_for_signal(const SignalSeries& signal, const MarketSeries& market, int lag);
std::vector<R2Row> r2_scan(const std::vector<sentiment::SentimentObservation>& sentiment,
                           const std::vector<int>& ns, const MarketSeries& market, int lag,
                           WindowMode mode = WindowMode::kInclusive);

struct BacktestResult {
  int n = 0;
  int lag = 0;
  std::vector<Date> dates;
  std::vector<int> positions;  // +1 long, -1 short, 0 flat
  std::vector<double> strategy_returns;
  std::vector<double> strategy_equity;   // cumulative return, compounded
  std::vector<double> benchmark_equity;  // buy-and-hold market, compounded
  double strategy_total = 0.0;
  double benchmark_total = 0.0;
  double outperformance = 0.0;            // strategy_total - benchmark_total
  double outperformance_geometric = 0.0;  // (1 + strategy) / (1 + benchmark) - 1
};

// Long the market when the lagged signal is 1, short when 0, flat when
// undefined. Runs from the first date with a defined lagged signal to the
// calendar end, with no transaction costs. Throws InvalidArgument when the
// signal never overlaps the market series.
BacktestResult backtest_strategy(const SignalSeries& signal, const MarketSeries& market, int lag = 2);

// Same, with positions given directly per trading date.
BacktestResult backtest_positions(const std::vector<std::optional<int>>& lagged_signal,
                                  const MarketSeries& market);

void write_signal_csv(std::ostream& out, const std::vector<SignalSeries>& signals);
void write_r2_csv(std::ostream& out, const std::vector<R2Row>& rows);
void write_backtest_csv(std::ostream& out, const BacktestResult& result);
// `N,lag,days,strategy_return,benchmark_return,outperformance,outperformance_geometric`
void write_backtest_summary_csv(std::ostream& out, const std::vector<BacktestResult>& results);

}  // namespace infocontent::timing
