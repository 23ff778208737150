#include "infocontent/eventstudy.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "infocontent/csv.hpp"
#include "infocontent/error.hpp"
#include "infocontent/linalg.hpp"

namespace infocontent::eventstudy {

using factormodel::FactorSeries;

void EventWindowConfig::validate() const {
  if (!(est_start < est_end && est_end < evt_start))
    throw InvalidArgument("event window: need est_start < est_end < evt_start");
  if (evt_len < 0) throw InvalidArgument("event window: evt_len must be >= 0");
  const auto span = static_cast<std::size_t>(est_end - est_start + 1);
  if (min_est_obs == 0 || min_est_obs > span)
    throw InvalidArgument("event window: min_est_obs must be in [1, " + std::to_string(span) + "]");
  if (min_est_obs <= kRegressors + 1)
    throw InvalidArgument("event window: min_est_obs must exceed the 16 estimated parameters");
}

ExcessReturns excess_returns(const factormodel::SecurityPanel& panel, std::size_t firm,
                             const FactorSeries& factors) {
  ExcessReturns out(factors.calendar.size());
  const auto& pcal = panel.calendar();
  for (std::size_t i = 0; i < factors.calendar.size(); ++i) {
    auto d = pcal.index_of(factors.calendar[i]);
    if (!d) continue;
    if (const auto* row = panel.find(firm, *d)) out[i] = row->daily_return - factors.days[i].rf;
  }
  return out;
}

std::optional<std::array<double, kRegressors>> regressors_at(const FactorSeries& factors, std::size_t i) {
  if (i == 0 || i + 1 >= factors.days.size()) return std::nullopt;
  std::array<double, kRegressors> x{};
  const auto prev = factors.days[i - 1].factors();
  const auto now = factors.days[i].factors();
  const auto next = factors.days[i + 1].factors();
  for (std::size_t f = 0; f < 5; ++f) {
    x[slope_index(f, -1)] = prev[f];
    x[slope_index(f, 0)] = now[f];
    x[slope_index(f, 1)] = next[f];
  }
  return x;
}

std::size_t align_event_date(const Date& announce, const TradingCalendar& calendar) {
  auto idx = calendar.index_on_or_after(announce);
  if (!idx) throw InvalidArgument("no trading date on or after " + announce.iso());
  return *idx;
}

namespace {

std::optional<std::size_t> offset(std::size_t base, int rel, std::size_t n) {
  const long long i = static_cast<long long>(base) + rel;
  if (i < 0 || i >= static_cast<long long>(n)) return std::nullopt;
  return static_cast<std::size_t>(i);
}

}  // namespace

ExposureEstimate estimate_exposures(std::span<const std::optional<double>> excess, const FactorSeries& factors,
                                    const EventWindowConfig& window, std::size_t event_idx) {
  window.validate();
  if (excess.size() != factors.days.size())
    throw InvalidArgument("estimate_exposures: returns and factors differ in length");

  std::vector<std::size_t> usable;
  for (int rel = window.est_start; rel <= window.est_end; ++rel) {
    auto i = offset(event_idx, rel, factors.days.size());
    if (i && excess[*i] && regressors_at(factors, *i)) usable.push_back(*i);
  }
  if (usable.size() < window.min_est_obs)
    throw InsufficientData("insufficient estimation data: " + std::to_string(usable.size()) + " < " +
                           std::to_string(window.min_est_obs) + " observations");

  const auto n = static_cast<Eigen::Index>(usable.size());
  Eigen::MatrixXd x(n, kRegressors + 1);
  Eigen::VectorXd y(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto reg = *regressors_at(factors, usable[r]);
    x(r, 0) = 1.0;
    for (std::size_t k = 0; k < kRegressors; ++k) x(r, static_cast<Eigen::Index>(k + 1)) = reg[k];
    y(r) = *excess[usable[r]];
  }
  auto fit = linalg::least_squares(x, y);

  ExposureEstimate est;
  est.alpha = fit.beta(0);
  for (std::size_t k = 0; k < kRegressors; ++k) est.slopes[k] = fit.beta(static_cast<Eigen::Index>(k + 1));
  est.n_obs = usable.size();
  est.residual_variance = fit.ssr / static_cast<double>(usable.size() - (kRegressors + 1));
  return est;
}

std::optional<double> ArPath::at(int rel_day) const {
  if (rel_day < start || rel_day > end()) return std::nullopt;
  return ar[static_cast<std::size_t>(rel_day - start)];
}

ArPath compute_ar(const ExposureEstimate& estimate, std::span<const std::optional<double>> excess,
                  const FactorSeries& factors, const EventWindowConfig& window, std::size_t event_idx) {
  ArPath path;
  path.start = window.evt_start;
  path.ar.resize(static_cast<std::size_t>(window.evt_len) + 1);
  for (int rel = window.evt_start; rel <= window.evt_end(); ++rel) {
    auto i = offset(event_idx, rel, factors.days.size());
    if (!i || !excess[*i]) continue;
    auto reg = regressors_at(factors, *i);
    if (!reg) continue;
    double expected = estimate.alpha;
    for (std::size_t k = 0; k < kRegressors; ++k) expected += estimate.slopes[k] * (*reg)[k];
    path.ar[static_cast<std::size_t>(rel - window.evt_start)] = *excess[*i] - expected;
  }
  return path;
}

ArPath slice(const ArPath& path, int from, int to) {
  ArPath out;
  out.start = from;
  for (int d = from; d <= to; ++d) out.ar.push_back(path.at(d));
  return out;
}

PooledResult pool_aar_caar(const std::vector<ArPath>& paths, int t0, int evt_len) {
  if (paths.empty()) throw InvalidArgument("pool_aar_caar: no abnormal-return paths");
  if (evt_len < 0) throw InvalidArgument("pool_aar_caar: evt_len must be >= 0");
  PooledResult out;
  out.t0 = t0;
  out.n_paths = paths.size();
  const auto len = static_cast<std::size_t>(evt_len) + 1;
  out.aar.resize(len);
  out.caar.resize(len);
  out.n_events.resize(len);
  double running = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    const int day = t0 + static_cast<int>(k);
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& p : paths)
      if (auto v = p.at(day)) {
        sum += *v;
        ++n;
      }
    out.n_events[k] = n;
    if (n > 0) {
      out.aar[k] = sum / static_cast<double>(n);
      running += *out.aar[k];
    }
    out.caar[k] = running;
  }
  return out;
}

EventStudyOutput run_event_study(std::vector<sentiment::StockSentimentEvent> events,
                                 const factormodel::SecurityPanel& panel, const FactorSeries& factors,
                                 const EventStudyConfig& config) {
  const auto& window = config.window;
  window.validate();
  if (config.sub_len < 0) throw InvalidArgument("event study: sub window length must be >= 0");
  if (factors.calendar.empty()) throw InvalidArgument("event study: empty factor series");

  // Canonical order so pooled sums do not depend on input order.
  std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
    return std::tie(a.firm_id, a.announce_date, a.sentiment) < std::tie(b.firm_id, b.announce_date, b.sentiment);
  });

  EventWindowConfig ar_window = window;
  ar_window.evt_start = std::min(window.evt_start, config.sub_start);
  ar_window.evt_len = std::max(window.evt_end(), config.sub_start + config.sub_len) - ar_window.evt_start;

  EventStudyOutput out;
  out.positive.label = "J+";
  out.negative.label = "J-";

  std::map<std::string, ExcessReturns> returns_cache;
  std::map<std::string, std::vector<std::size_t>> aligned_by_firm;

  for (const auto& ev : events) {
    auto& group = ev.polarity == sentiment::Polarity::kPositive ? out.positive : out.negative;
    auto exclude = [&](const std::string& reason) { out.exclusions.push_back({ev.firm_id, ev.announce_date, reason}); };

    auto firm = panel.firm_index(ev.firm_id);
    if (!firm) {
      exclude("firm not in panel");
      continue;
    }
    auto idx = factors.calendar.index_on_or_after(ev.announce_date);
    if (!idx) {
      exclude("no trading date on or after announcement");
      continue;
    }
    auto [it, inserted] = returns_cache.try_emplace(ev.firm_id);
    if (inserted) it->second = excess_returns(panel, *firm, factors);
    const auto& excess = it->second;

    ExposureEstimate est;
    try {
      est = estimate_exposures(excess, factors, window, *idx);
    } catch (const InsufficientData& e) {
      exclude(e.what());
      continue;
    } catch (const NumericError& e) {
      exclude(e.what());
      continue;
    }
    est.firm_id = ev.firm_id;
    ArPath path = compute_ar(est, excess, factors, ar_window, *idx);
    if (std::none_of(path.ar.begin(), path.ar.end(), [](const auto& v) { return v.has_value(); })) {
      exclude("no abnormal-return observations in event window");
      continue;
    }

    auto& prior = aligned_by_firm[ev.firm_id];
    if (std::any_of(prior.begin(), prior.end(), [&](std::size_t p) {
          const auto gap = p > *idx ? p - *idx : *idx - p;
          return gap <= static_cast<std::size_t>(ar_window.evt_len);
        }))
      ++out.overlapping_events;
    prior.push_back(*idx);

    group.estimates.push_back(est);
    group.paths.push_back(std::move(path));
    ++group.n_events;
  }

  for (auto* g : {&out.positive, &out.negative}) {
    if (g->empty()) continue;
    std::vector<ArPath> full, sub;
    for (const auto& p : g->paths) {
      full.push_back(slice(p, window.evt_start, window.evt_end()));
      sub.push_back(slice(p, config.sub_start, config.sub_start + config.sub_len));
    }
    g->full = pool_aar_caar(full, window.evt_start, window.evt_len);
    g->sub = pool_aar_caar(sub, config.sub_start, config.sub_len);
  }
  return out;
}

std::string window_label(const std::string& group, int from, int to) {
  return group + "[" + std::to_string(from) + "," + std::to_string(to) + "]";
}

void write_event_study_csv(std::ostream& out, const EventStudyOutput& result) {
  CsvWriter w(out);
  w.header({"group", "relative_day", "aar", "caar", "n_events"});
  for (const auto* g : {&result.positive, &result.negative}) {
    for (const auto* pooled : {&g->full, &g->sub}) {
      if (!*pooled) continue;
      const auto& p = **pooled;
      const std::string label = window_label(g->label, p.t0, p.relative_day(p.aar.size() - 1));
      for (std::size_t k = 0; k < p.aar.size(); ++k) {
        w.field(label).field(p.relative_day(k));
        if (p.aar[k])
          w.field(*p.aar[k]);
        else
          w.empty();
        w.field(p.caar[k]).field(p.n_events[k]);
        w.end_row();
      }
    }
  }
}

void write_exclusions_csv(std::ostream& out, const std::vector<Exclusion>& exclusions) {
  CsvWriter w(out);
  w.header({"firm_id", "announce_date", "reason"});
  for (const auto& e : exclusions) {
    w.field(e.firm_id).field(e.announce_date.iso()).field(e.reason);
    w.end_row();
  }
}

}  // namespace infocontent::eventstudy
