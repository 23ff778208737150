#include "infocontent/timing.hpp"

#include <cmath>

#include "infocontent/csv.hpp"
#include "infocontent/error.hpp"

namespace infocontent::timing {

SignalSeries build_signal(const std::vector<sentiment::SentimentObservation>& sentiment, int n,
                          WindowMode mode) {
  if (n <= 0) throw InvalidArgument("build_signal: N must be positive");
  std::vector<const sentiment::SentimentObservation*> obs;
  for (const auto& o : sentiment)
    if (o.score) obs.push_back(&o);
  for (std::size_t i = 1; i < obs.size(); ++i)
    if (!(obs[i - 1]->date < obs[i]->date)) throw InvalidArgument("build_signal: sentiment not sorted by date");

  SignalSeries s;
  s.n = n;
  s.mode = mode;
  const auto un = static_cast<std::size_t>(n);
  if (un >= obs.size()) {
    s.warnings.push_back("N=" + std::to_string(n) + " >= series length " + std::to_string(obs.size()) +
                         "; signal is empty");
    return s;
  }
  for (std::size_t k = un; k < obs.size(); ++k) {
    const std::size_t first = mode == WindowMode::kInclusive ? k + 1 - un : k - un;
    const double x = *obs[k]->score;
    // Sum of (x - x_i) has the sign of x - mean and is exactly 0 for a flat window.
    double diff = 0.0;
    for (std::size_t i = first; i < first + un; ++i) diff += x - *obs[i]->score;
    s.dates.push_back(obs[k]->date);
    s.values.push_back(diff > 0.0 ? 1 : 0);
  }
  s.defined_from = s.dates.front();
  return s;
}

MarketSeries market_excess_return(const factormodel::FactorSeries& factors) {
  MarketSeries m;
  m.calendar = factors.calendar;
  for (const auto& d : factors.days) m.values.push_back(d.rmrf);
  return m;
}

std::vector<std::optional<int>> align_signal(const SignalSeries& signal, const TradingCalendar& calendar) {
  std::vector<std::optional<int>> out(calendar.size());
  for (std::size_t k = 0; k < signal.dates.size(); ++k)
    if (auto i = calendar.index_on_or_after(signal.dates[k])) out[*i] = signal.values[k];
  return out;
}

std::vector<std::optional<int>> lag_signal(const std::vector<std::optional<int>>& aligned, int lag) {
  if (lag < 0) throw InvalidArgument("lag must be >= 0");
  const auto ul = static_cast<std::size_t>(lag);
  std::vector<std::optional<int>> out(aligned.size());
  for (std::size_t i = ul; i < aligned.size(); ++i) out[i] = aligned[i - ul];
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

R2Row r2_for_signal(const SignalSeries& signal, const MarketSeries& market, int lag) {
  auto lagged = lag_signal(align_signal(signal, market.calendar), lag);
  std::vector<double> x, y;
  for (std::size_t i = 0; i < lagged.size(); ++i)
    if (lagged[i]) {
      x.push_back(*lagged[i]);
      y.push_back(market.values[i]);
    }
  R2Row row;
  row.n = signal.n;
  row.lag = lag;
  row.n_obs = x.size();
  auto constant = [](const std::vector<double>& v) {
    for (double e : v)
      if (e != v.front()) return false;
    return true;
  };
  if (x.size() < 2 || constant(x) || constant(y)) return row;
  double r = pearson(x, y);
  row.correlation = r;
  row.r2 = r * r;
  row.corr_sign = r > 0 ? 1 : (r < 0 ? -1 : 0);
  return row;
}

std::vector<R2Row> r2_scan(const std::vector<sentiment::SentimentObservation>& sentiment,
                           const std::vector<int>& ns, const MarketSeries& market, int lag, WindowMode mode) {
  if (lag < 0) throw InvalidArgument("r2_scan: lag must be >= 0");
  std::vector<R2Row> rows;
  for (int n : ns) rows.push_back(r2_for_signal(build_signal(sentiment, n, mode), market, lag));
  return rows;
}

BacktestResult backtest_positions(const std::vector<std::optional<int>>& lagged_signal,
                                  const MarketSeries& market) {
  if (lagged_signal.size() != market.values.size())
    throw InvalidArgument("backtest: signal and market series differ in length");
  std::size_t first = 0;
  while (first < lagged_signal.size() && !lagged_signal[first]) ++first;
  if (first == lagged_signal.size()) throw InvalidArgument("backtest: signal and market series do not overlap");

  BacktestResult r;
  double strat = 1.0, bench = 1.0;
  for (std::size_t i = first; i < market.values.size(); ++i) {
    const int pos = lagged_signal[i] ? (*lagged_signal[i] == 1 ? 1 : -1) : 0;
    const double ret = pos == 0 ? 0.0 : pos * market.values[i];
    strat *= 1.0 + ret;
    bench *= 1.0 + market.values[i];
    r.dates.push_back(market.calendar[i]);
    r.positions.push_back(pos);
    r.strategy_returns.push_back(ret);
    r.strategy_equity.push_back(strat - 1.0);
    r.benchmark_equity.push_back(bench - 1.0);
  }
  r.strategy_total = strat - 1.0;
  r.benchmark_total = bench - 1.0;
  r.outperformance = r.strategy_total - r.benchmark_total;
  r.outperformance_geometric = strat / bench - 1.0;
  return r;
}

BacktestResult backtest_strategy(const SignalSeries& signal, const MarketSeries& market, int lag) {
  auto r = backtest_positions(lag_signal(align_signal(signal, market.calendar), lag), market);
  r.n = signal.n;
  r.lag = lag;
  return r;
}

void write_signal_csv(std::ostream& out, const std::vector<SignalSeries>& signals) {
  CsvWriter w(out);
  w.header({"date", "N", "signal"});
  for (const auto& s : signals)
    for (std::size_t k = 0; k < s.dates.size(); ++k) {
      w.field(s.dates[k].iso()).field(s.n).field(s.values[k]);
      w.end_row();
    }
}

void write_r2_csv(std::ostream& out, const std::vector<R2Row>& rows) {
  CsvWriter w(out);
  w.header({"N", "lag", "r2", "corr_sign"});
  for (const auto& r : rows) {
    w.field(r.n).field(r.lag);
    if (r.r2)
      w.field(*r.r2);
    else
      w.empty();
    w.field(r.corr_sign);
    w.end_row();
  }
}

void write_backtest_csv(std::ostream& out, const BacktestResult& result) {
  CsvWriter w(out);
  w.header({"date", "position", "strategy_ret", "strategy_equity", "benchmark_equity"});
  for (std::size_t i = 0; i < result.dates.size(); ++i) {
    w.field(result.dates[i].iso())
        .field(result.positions[i])
        .field(result.strategy_returns[i])
        .field(result.strategy_equity[i])
        .field(result.benchmark_equity[i]);
    w.end_row();
  }
}

void write_backtest_summary_csv(std::ostream& out, const std::vector<BacktestResult>& results) {
  CsvWriter w(out);
  w.header({"N", "lag", "days", "strategy_return", "benchmark_return", "outperformance",
            "outperformance_geometric"});
  for (const auto& r : results) {
    w.field(r.n).field(r.lag).field(r.dates.size()).field(r.strategy_total).field(r.benchmark_total);
    w.field(r.outperformance).field(r.outperformance_geometric);
    w.end_row();
  }
}

}  // namespace infocontent::timing
