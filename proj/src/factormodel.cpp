#include "infocontent/factormodel.hpp"

#include <algorithm>
#include <cmath>

#include "infocontent/csv.hpp"
#include "infocontent/error.hpp"

namespace infocontent::factormodel {

DatedSeries load_dated_series(const std::filesystem::path& path, const std::string& value_column) {
  CsvTable t = read_csv(path, {"date", value_column});
  DatedSeries out;
  for (const auto& row : t.rows) {
    auto d = Date::parse(row.fields[0]);
    if (!d) throw ParseError(t.source, row.number, "date", "invalid date '" + row.fields[0] + "'");
    double v = cell_double(t, row, 1);
    if (!std::isfinite(v)) throw ParseError(t.source, row.number, value_column, "not finite");
    if (!out.emplace(*d, v).second) throw ParseError(t.source, row.number, "date", "duplicate date");
  }
  return out;
}

// ---------------------------------------------------------------------------
// SecurityPanel

SecurityPanel::SecurityPanel(std::vector<PanelRow> rows) : rows_(std::move(rows)) {
  for (const auto& r : rows_) {
    if (!(r.market_cap > 0.0) || !std::isfinite(r.market_cap))
      throw InvalidArgument("panel: nonpositive market_cap for " + r.firm_id + " on " + r.date.iso());
    if (!(r.daily_return > -1.0) || !std::isfinite(r.daily_return))
      throw InvalidArgument("panel: daily_return must be > -1 for " + r.firm_id + " on " + r.date.iso());
  }
  std::sort(rows_.begin(), rows_.end(), [](const PanelRow& a, const PanelRow& b) {
    return a.date != b.date ? a.date < b.date : a.firm_id < b.firm_id;
  });
  for (std::size_t i = 1; i < rows_.size(); ++i)
    if (rows_[i].date == rows_[i - 1].date && rows_[i].firm_id == rows_[i - 1].firm_id)
      throw InvalidArgument("panel: duplicate row for " + rows_[i].firm_id + " on " + rows_[i].date.iso());

  std::vector<Date> dates;
  for (const auto& r : rows_) {
    if (dates.empty() || dates.back() != r.date) {
      dates.push_back(r.date);
      date_offsets_.push_back(&r - rows_.data());
    }
    firm_lookup_.emplace(r.firm_id, 0);
  }
  date_offsets_.push_back(rows_.size());
  calendar_ = TradingCalendar(std::move(dates));
  for (auto& [id, idx] : firm_lookup_) {
    idx = firms_.size();
    firms_.push_back(id);
  }
  cell_.assign(firms_.size() * calendar_.size(), -1);
  for (std::size_t d = 0; d < calendar_.size(); ++d)
    for (std::size_t i = date_offsets_[d]; i < date_offsets_[d + 1]; ++i)
      cell_[firm_lookup_.at(rows_[i].firm_id) * calendar_.size() + d] = static_cast<std::int32_t>(i);
}

std::vector<const PanelRow*> SecurityPanel::rows_on(std::size_t d) const {
  std::vector<const PanelRow*> out;
  for (std::size_t i = date_offsets_.at(d); i < date_offsets_.at(d + 1); ++i) out.push_back(&rows_[i]);
  return out;
}

const PanelRow* SecurityPanel::find(std::size_t firm, std::size_t d) const {
  auto idx = cell_[firm * calendar_.size() + d];
  return idx < 0 ? nullptr : &rows_[static_cast<std::size_t>(idx)];
}

std::optional<std::size_t> SecurityPanel::firm_index(const std::string& firm_id) const {
  auto it = firm_lookup_.find(firm_id);
  if (it == firm_lookup_.end()) return std::nullopt;
  return it->second;
}

SecurityPanel load_panel(const std::filesystem::path& path) {
  CsvTable t = read_csv(path, {"firm_id", "date", "daily_return", "market_cap", "exchange", "book_equity",
                               "operating_income", "total_assets", "total_assets_prior"});
  std::vector<PanelRow> rows;
  rows.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    PanelRow r;
    r.firm_id = row.fields[0];
    if (r.firm_id.empty()) throw ParseError(t.source, row.number, "firm_id", "empty");
    auto d = Date::parse(row.fields[1]);
    if (!d) throw ParseError(t.source, row.number, "date", "invalid date '" + row.fields[1] + "'");
    r.date = *d;
    r.daily_return = cell_double(t, row, 2);
    if (!(r.daily_return > -1.0)) throw ParseError(t.source, row.number, "daily_return", "must be > -1");
    r.market_cap = cell_double(t, row, 3);
    if (!(r.market_cap > 0.0)) throw ParseError(t.source, row.number, "market_cap", "must be positive");
    r.exchange = row.fields[4];
    r.book_equity = cell_double(t, row, 5);
    r.operating_income = cell_double(t, row, 6);
    r.total_assets = cell_double(t, row, 7);
    r.total_assets_prior = cell_double(t, row, 8);
    rows.push_back(std::move(r));
  }
  std::sort(rows.begin(), rows.end(), [](const PanelRow& a, const PanelRow& b) {
    return a.date != b.date ? a.date < b.date : a.firm_id < b.firm_id;
  });
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].date == rows[i - 1].date && rows[i].firm_id == rows[i - 1].firm_id)
      throw ParseError(t.source + ": duplicate (firm_id, date) = (" + rows[i].firm_id + ", " +
                       rows[i].date.iso() + ")");
  return SecurityPanel(std::move(rows));
}

// ---------------------------------------------------------------------------
// Factor files

FactorSeries load_factors(const std::filesystem::path& path) {
  CsvTable t = read_csv(path, {"date", "rmrf", "smb", "hml", "rmw", "cma", "rf"});
  std::vector<std::pair<Date, FactorDay>> rows;
  for (const auto& row : t.rows) {
    auto d = Date::parse(row.fields[0]);
    if (!d) throw ParseError(t.source, row.number, "date", "invalid date '" + row.fields[0] + "'");
    FactorDay f{cell_double(t, row, 1), cell_double(t, row, 2), cell_double(t, row, 3),
                cell_double(t, row, 4), cell_double(t, row, 5), cell_double(t, row, 6)};
    for (double v : {f.rmrf, f.smb, f.hml, f.rmw, f.cma, f.rf})
      if (!std::isfinite(v)) throw ParseError(t.source, row.number, "*", "non-finite value");
    if (f.rf < -1.0) throw ParseError(t.source, row.number, "rf", "must be >= -1");
    rows.emplace_back(*d, f);
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  FactorSeries out;
  std::vector<Date> dates;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].first == rows[i - 1].first)
      throw ParseError(t.source + ": duplicate date " + rows[i].first.iso());
    dates.push_back(rows[i].first);
    out.days.push_back(rows[i].second);
  }
  out.calendar = TradingCalendar(std::move(dates));
  return out;
}

void write_factors_csv(std::ostream& out, const FactorSeries& f) {
  CsvWriter w(out);
  w.header({"date", "rmrf", "smb", "hml", "rmw", "cma", "rf"});
  for (std::size_t i = 0; i < f.calendar.size(); ++i) {
    const auto& d = f.days[i];
    w.field(f.calendar[i].iso()).field(d.rmrf).field(d.smb).field(d.hml).field(d.rmw).field(d.cma).field(d.rf);
    w.end_row();
  }
}

// ---------------------------------------------------------------------------
// Construction

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw InvalidArgument("percentile of an empty set");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

namespace {

constexpr int kUnassigned = -1;

std::optional<double> characteristic(const PanelRow& r, SortDimension dim) {
  switch (dim) {
    case SortDimension::kBookToMarket:
      if (r.book_equity > 0.0) return r.book_equity / r.market_cap;
      return std::nullopt;
    case SortDimension::kProfitability:
      if (r.book_equity > 0.0) return r.operating_income / r.book_equity;
      return std::nullopt;
    case SortDimension::kInvestment:
      if (r.total_assets_prior > 0.0) return r.total_assets / r.total_assets_prior - 1.0;
      return std::nullopt;
  }
  return std::nullopt;
}

// Per-firm portfolio membership fixed at one rebalance date.
struct Assignment {
  std::vector<int> size;                   // 0 small, 1 big, -1 absent
  std::array<std::vector<int>, 3> bucket;  // 0 low, 1 neutral, 2 high, -1 unsorted
};

Assignment assign(const SecurityPanel& panel, std::size_t rebalance_idx, const FactorConfig& cfg) {
  const std::size_t nfirms = panel.firms().size();
  Assignment a;
  a.size.assign(nfirms, kUnassigned);
  for (auto& b : a.bucket) b.assign(nfirms, kUnassigned);

  std::vector<double> main_caps;
  for (std::size_t f = 0; f < nfirms; ++f)
    if (const auto* r = panel.find(f, rebalance_idx); r && r->exchange == cfg.main_exchange)
      main_caps.push_back(r->market_cap);
  if (main_caps.size() < 6)
    throw InvalidArgument("factor construction: only " + std::to_string(main_caps.size()) +
                          " main-exchange stocks on rebalance date " + panel.calendar()[rebalance_idx].iso() +
                          " (need >= 6)");
  const double size_bp = percentile(main_caps, 0.5);

  for (std::size_t f = 0; f < nfirms; ++f)
    if (const auto* r = panel.find(f, rebalance_idx)) a.size[f] = r->market_cap <= size_bp ? 0 : 1;

  for (int dim = 0; dim < 3; ++dim) {
    auto sd = static_cast<SortDimension>(dim);
    std::vector<double> main_vals;
    for (std::size_t f = 0; f < nfirms; ++f)
      if (const auto* r = panel.find(f, rebalance_idx); r && r->exchange == cfg.main_exchange)
        if (auto v = characteristic(*r, sd)) main_vals.push_back(*v);
    if (main_vals.empty()) continue;
    const double lo = percentile(main_vals, 0.3);
    const double hi = percentile(main_vals, 0.7);
    for (std::size_t f = 0; f < nfirms; ++f) {
      const auto* r = panel.find(f, rebalance_idx);
      if (!r) continue;
      auto v = characteristic(*r, sd);
      if (!v) continue;
      a.bucket[dim][f] = *v <= lo ? 0 : (*v >= hi ? 2 : 1);
    }
  }
  return a;
}

std::optional<double> mean_of(std::initializer_list<std::optional<double>> xs) {
  double sum = 0.0;
  int n = 0;
  for (const auto& x : xs)
    if (x) {
      sum += *x;
      ++n;
    }
  if (n == 0) return std::nullopt;
  return sum / n;
}

}  // namespace

FactorConstruction construct_factors(const SecurityPanel& panel, const DatedSeries& rf,
                                     const FactorConfig& config) {
  const auto& cal = panel.calendar();
  if (cal.empty()) throw InvalidArgument("factor construction: empty panel");

  std::vector<std::size_t> rebalances;
  const int first_year = static_cast<int>(cal[0].ymd().year());
  const int last_year = static_cast<int>(cal[cal.size() - 1].ymd().year());
  for (int y = first_year; y <= last_year; ++y) {
    auto idx = cal.index_on_or_after(Date(y, config.rebalance_month, config.rebalance_day));
    if (!idx) break;
    if (rebalances.empty() || rebalances.back() != *idx) rebalances.push_back(*idx);
  }
  if (rebalances.empty())
    throw InvalidArgument("factor construction: panel contains no rebalance date");

  FactorConstruction out;
  std::vector<Date> dates;
  const std::size_t nfirms = panel.firms().size();

  for (std::size_t k = 0; k < rebalances.size(); ++k) {
    const std::size_t begin = rebalances[k];
    const std::size_t end = k + 1 < rebalances.size() ? rebalances[k + 1] : cal.size();
    out.rebalance_dates.push_back(cal[begin]);
    const Assignment a = assign(panel, begin, config);

    for (std::size_t d = begin; d < end; ++d) {
      auto rf_it = rf.find(cal[d]);
      if (rf_it == rf.end()) throw InvalidArgument("factor construction: no rf for " + cal[d].iso());

      double mkt_num = 0.0, mkt_den = 0.0;
      std::array<std::array<std::array<double, 3>, 2>, 3> num{}, den{};
      for (std::size_t f = 0; f < nfirms; ++f) {
        const auto* r = panel.find(f, d);
        if (!r) continue;
        mkt_num += r->market_cap * r->daily_return;
        mkt_den += r->market_cap;
        if (a.size[f] == kUnassigned) continue;
        for (int dim = 0; dim < 3; ++dim) {
          int b = a.bucket[dim][f];
          if (b == kUnassigned) continue;
          num[dim][a.size[f]][b] += r->market_cap * r->daily_return;
          den[dim][a.size[f]][b] += r->market_cap;
        }
      }

      std::array<SortReturns, 3> ports{};
      for (int dim = 0; dim < 3; ++dim)
        for (int s = 0; s < 2; ++s)
          for (int b = 0; b < 3; ++b)
            if (den[dim][s][b] > 0.0) ports[dim][s][b] = num[dim][s][b] / den[dim][s][b];

      auto spread = [&](std::optional<double> long_leg, std::optional<double> short_leg) -> std::optional<double> {
        if (!long_leg || !short_leg) {
          ++out.degenerate_spreads;
          return std::nullopt;
        }
        return *long_leg - *short_leg;
      };

      FactorDay day;
      day.rf = rf_it->second;
      day.rmrf = mkt_num / mkt_den - day.rf;

      std::array<std::optional<double>, 3> smb_dim;
      for (int dim = 0; dim < 3; ++dim) {
        const auto& p = ports[dim];
        smb_dim[dim] = spread(mean_of({p[0][0], p[0][1], p[0][2]}), mean_of({p[1][0], p[1][1], p[1][2]}));
      }
      day.smb = mean_of({smb_dim[0], smb_dim[1], smb_dim[2]}).value_or(0.0);

      auto high_minus_low = [&](int dim, bool long_high) {
        const auto& p = ports[dim];
        auto high = mean_of({p[0][2], p[1][2]});
        auto low = mean_of({p[0][0], p[1][0]});
        return (long_high ? spread(high, low) : spread(low, high)).value_or(0.0);
      };
      day.hml = high_minus_low(0, true);
      day.rmw = high_minus_low(1, true);
      day.cma = high_minus_low(2, false);

      dates.push_back(cal[d]);
      out.series.days.push_back(day);
      out.portfolios.push_back(ports);
    }
  }
  out.series.calendar = TradingCalendar(std::move(dates));
  return out;
}

double compute_pct_zero(const SecurityPanel& panel, const Date& date) {
  auto d = panel.calendar().index_of(date);
  if (!d) throw InvalidArgument("pct_zero: " + date.iso() + " is not a trading date");
  auto rows = panel.rows_on(*d);
  std::size_t zeros = 0;
  for (const auto* r : rows)
    if (r->daily_return == 0.0) ++zeros;
  return static_cast<double>(zeros) / static_cast<double>(rows.size());
}

// ---------------------------------------------------------------------------
// Controls

ControlSeries build_controls(const TradingCalendar& calendar, const DatedSeries& nsi,
                             const DatedSeries& short_rate, const DatedSeries& pct_zero,
                             const Date& sample_first, const Date& sample_last) {
  ControlSeries out;
  out.calendar = calendar;
  out.days.resize(calendar.size());
  std::vector<std::string> gaps;
  for (std::size_t i = 0; i < calendar.size(); ++i) {
    const Date& d = calendar[i];
    auto& day = out.days[i];
    if (auto it = nsi.find(d); it != nsi.end()) day.nsi = it->second;
    if (auto it = short_rate.find(d); it != short_rate.end()) day.short_rate = it->second;
    if (auto it = pct_zero.find(d); it != pct_zero.end()) {
      if (it->second < 0.0 || it->second > 1.0)
        throw InvalidArgument("controls: pct_zero outside [0,1] on " + d.iso());
      day.pct_zero = it->second;
    }
    if (i > 0 && day.nsi && out.days[i - 1].nsi) day.d_nsi = *day.nsi - *out.days[i - 1].nsi;
    if (d >= sample_first && d <= sample_last) {
      if (!day.nsi) gaps.push_back(d.iso() + " (nsi)");
      if (!day.short_rate) gaps.push_back(d.iso() + " (short_rate)");
    }
  }
  if (!gaps.empty()) {
    std::string msg = "controls: " + std::to_string(gaps.size()) + " missing values in sample range: ";
    for (std::size_t i = 0; i < gaps.size() && i < 10; ++i) msg += (i ? ", " : "") + gaps[i];
    if (gaps.size() > 10) msg += ", ...";
    throw InvalidArgument(msg);
  }
  return out;
}

ControlSeries load_controls(const std::filesystem::path& nsi_path,
                            const std::filesystem::path& short_rate_path,
                            const TradingCalendar& calendar, const SecurityPanel* panel,
                            const Date& sample_first, const Date& sample_last) {
  DatedSeries nsi = load_dated_series(nsi_path, "nsi");
  DatedSeries rate = load_dated_series(short_rate_path, "short_rate");
  DatedSeries pz;
  if (panel)
    for (const auto& d : calendar.dates())
      if (panel->calendar().index_of(d)) pz[d] = compute_pct_zero(*panel, d);
  return build_controls(calendar, nsi, rate, pz, sample_first, sample_last);
}

void write_controls_csv(std::ostream& out, const ControlSeries& c) {
  CsvWriter w(out);
  w.header({"date", "pct_zero", "short_rate", "nsi", "d_nsi"});
  auto opt = [&](const std::optional<double>& v) {
    if (v)
      w.field(*v);
    else
      w.empty();
  };
  for (std::size_t i = 0; i < c.calendar.size(); ++i) {
    w.field(c.calendar[i].iso());
    opt(c.days[i].pct_zero);
    opt(c.days[i].short_rate);
    opt(c.days[i].nsi);
    opt(c.days[i].d_nsi);
    w.end_row();
  }
}

ControlSeries read_controls_csv(const std::filesystem::path& path) {
  CsvTable t = read_csv(path, {"date", "pct_zero", "short_rate", "nsi", "d_nsi"});
  ControlSeries out;
  std::vector<Date> dates;
  for (const auto& row : t.rows) {
    auto d = Date::parse(row.fields[0]);
    if (!d) throw ParseError(t.source, row.number, "date", "invalid date");
    dates.push_back(*d);
    ControlDay day;
    auto cell = [&](std::size_t col) -> std::optional<double> {
      if (row.fields[col].empty()) return std::nullopt;
      return cell_double(t, row, col);
    };
    day.pct_zero = cell(1);
    day.short_rate = cell(2);
    day.nsi = cell(3);
    day.d_nsi = cell(4);
    out.days.push_back(day);
  }
  out.calendar = TradingCalendar(dates);
  if (out.calendar.size() != out.days.size()) throw ParseError(t.source + ": duplicate or unsorted dates");
  for (std::size_t i = 0; i < dates.size(); ++i)
    if (dates[i] != out.calendar[i]) throw ParseError(t.source + ": dates must be ascending");
  return out;
}

}  // namespace infocontent::factormodel
