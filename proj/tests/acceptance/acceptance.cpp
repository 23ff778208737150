// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "../factor_oracle.hpp"
#include "../fixtures.hpp"
#include "../oracles.hpp"
#include "../support.hpp"
#include "infocontent/config.hpp"
#include "infocontent/corpus.hpp"
#include "infocontent/csv.hpp"
#include "infocontent/econometrics.hpp"
#include "infocontent/eventstudy.hpp"
#include "infocontent/factormodel.hpp"
#include "infocontent/pipeline.hpp"
#include "infocontent/sentiment.hpp"
#include "infocontent/synthetic.hpp"
#include "infocontent/timing.hpp"

using namespace infocontent;
namespace fs = std::filesystem;

namespace {

// Collects failed checks for one criterion.
struct Checker {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
    if (!ok) ++failed;
  }
  std::size_t failed = 0;
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome finish(const Checker& c, std::string detail) {
  if (c.failed == 0) return {true, std::move(detail)};
  std::string msg = std::to_string(c.failed) + " check(s) failed: ";
  for (std::size_t i = 0; i < c.failures.size(); ++i) msg += (i ? "; " : "") + c.failures[i];
  return {false, msg};
}

// Runs `stages` of the pipeline on a synthetic dataset written to `dir`.
fs::path run_synthetic(const synthetic::SynthConfig& cfg, const fs::path& dir, const std::vector<Stage>& stages) {
  synthetic::write_dataset(synthetic::gen_dataset(cfg), dir / "data");
  auto rc = RunConfig::load(dir / "data" / "config.ini");
  rc.output_dir = dir / "out";
  Pipeline p(rc);
  for (auto s : stages) p.run(s);
  return rc.output_dir;
}

// ---------------------------------------------------------------------------

Outcome sentiment_exactness() {
  Checker c;
  // 14 tokens over three days; positive {호조, 상승}, negative {하락, 부진}.
  std::vector<corpus::TranscriptRecord> records{
      {"c1", Date(2022, 9, 1), "호조 상승 호조. 하락, 보합"},
      {"c2", Date(2022, 9, 1), "상승! 상승 부진"},
      {"c3", Date(2022, 9, 2), "보합 보합"},
      {"c4", Date(2022, 9, 3), "하락 하락 부진 호조"},
  };
  auto lex = sentiment::make_lexicon({"호조", "상승"}, {"하락", "부진"});
  auto days = corpus::build_days(records);
  c.expect(days.size() == 3, "expected three days");
  if (days.size() != 3) return finish(c, "");
  std::size_t tokens = 0;
  for (const auto& d : days) tokens += d.tokens.size();
  c.expect(tokens == 14, "token count " + std::to_string(tokens));
  c.expect(days[0].source_count == 2, "day 1 source count");

  // Hand counts: day 1 has 호조 x2 + 상승 x3 against 하락 + 부진.
  struct Hand {
    std::size_t pos, neg;
    std::optional<double> score;
  };
  const Hand hand[3] = {{5, 2, 3.0 / 7.0}, {0, 0, std::nullopt}, {1, 3, -0.5}};
  for (std::size_t i = 0; i < 3; ++i) {
    auto o = sentiment::score_day(days[i], lex);
    const std::string tag = "day " + std::to_string(i + 1);
    c.expect(o.n_positive == hand[i].pos, tag + " positive count " + std::to_string(o.n_positive));
    c.expect(o.n_negative == hand[i].neg, tag + " negative count " + std::to_string(o.n_negative));
    c.expect(o.score == hand[i].score, tag + " score");
  }
  return finish(c, "3 days, 14 tokens, counts and scores exact");
}

Outcome ols_oracle() {
  Checker c;
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_real_distribution<double> scale(0.2, 5.0);
  double worst = 0.0;

  // fit_ols: intercept plus 15 regressors.
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 40 + gen() % 261;
    std::vector<std::vector<std::optional<double>>> cols(15, std::vector<std::optional<double>>(n));
    std::vector<std::optional<double>> y(n);
    testing::Matrix x(n, std::vector<double>(16, 1.0));
    std::vector<double> yv(n);
    std::vector<double> s(15);
    for (auto& v : s) v = scale(gen);
    for (std::size_t i = 0; i < n; ++i) {
      double yi = z(gen);
      for (std::size_t j = 0; j < 15; ++j) {
        const double v = s[j] * z(gen);
        cols[j][i] = v;
        x[i][j + 1] = v;
        yi += (0.1 * static_cast<double>(j) - 0.7) * v;
      }
      y[i] = yi;
      yv[i] = yi;
    }
    std::vector<std::string> names;
    for (int j = 0; j < 15; ++j) names.push_back("x" + std::to_string(j));
    auto fit = econometrics::fit_ols(econometrics::DesignMatrix::from_columns(names, cols, y));
    auto ref = testing::normal_equations(x, yv);
    for (std::size_t k = 0; k < 16; ++k) worst = std::max(worst, std::abs(fit.coefficients[k].estimate - ref[k]));
  }

  // estimate_exposures: random factor paths, windows and gaps.
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t len = 420;
    factormodel::FactorSeries f;
    std::vector<Date> dates;
    std::normal_distribution<double> fz(0.0, 0.01);
    for (std::size_t i = 0; i < len; ++i) {
      dates.push_back(Date(2019, 1, 1).plus_days(static_cast<int>(i)));
      f.days.push_back({fz(gen), fz(gen), fz(gen), fz(gen), fz(gen), 0.0001});
    }
    f.calendar = TradingCalendar(dates);
    eventstudy::EventWindowConfig w;
    w.est_start = -300 + static_cast<int>(gen() % 120);  // at most 280 estimation days
    const double gap_rate = 0.2 * static_cast<double>(gen() % 4) / 3.0;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    eventstudy::ExcessReturns excess(len);
    for (std::size_t i = 1; i + 1 < len; ++i)
      if (u(gen) >= gap_rate)
        excess[i] = 0.0004 + 1.1 * f.days[i].rmrf - 0.4 * f.days[i - 1].hml + 0.2 * f.days[i + 1].cma + 0.02 * fz(gen);
    const std::size_t event = 330;
    auto est = eventstudy::estimate_exposures(excess, f, w, event);

    testing::Matrix x;
    std::vector<double> yv;
    for (int rel = w.est_start; rel <= w.est_end; ++rel) {
      const std::size_t i = event + rel;
      if (!excess[i]) continue;
      std::vector<double> row{1.0};
      for (std::size_t k = 0; k < 5; ++k)
        for (std::size_t t : {i - 1, i, i + 1}) row.push_back(f.days[t].factors()[k]);
      x.push_back(row);
      yv.push_back(*excess[i]);
    }
    c.expect(x.size() <= 300, "design larger than 300 rows");
    auto ref = testing::normal_equations(x, yv);
    worst = std::max(worst, std::abs(est.alpha - ref[0]));
    for (std::size_t k = 0; k < eventstudy::kRegressors; ++k)
      worst = std::max(worst, std::abs(est.slopes[k] - ref[k + 1]));
  }
  c.expect(worst <= 1e-8, "max coefficient gap " + fmt("%.3g", worst));
  return finish(c, "200 designs, max coefficient gap " + fmt("%.2g", worst));
}

Outcome logit_oracle() {
  Checker c;
  std::mt19937_64 gen(77);
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0, worst_grad = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t p = 1 + trial % 2;
    const std::size_t n = 12 + gen() % 19;
    std::vector<double> beta{z(gen) * 0.5};
    for (std::size_t j = 0; j < p; ++j) beta.push_back(z(gen));
    testing::Matrix x;
    std::vector<double> y;
    // p + 1 affinely independent points carrying both outcomes rule out
    // separation, so the maximum exists.
    for (std::size_t a = 0; a <= p; ++a) {
      std::vector<double> row{1.0};
      for (std::size_t j = 0; j < p; ++j) row.push_back(a == j + 1 ? 1.0 : 0.0);
      for (double label : {0.0, 1.0}) {
        x.push_back(row);
        y.push_back(label);
      }
    }
    while (x.size() < n) {
      std::vector<double> row{1.0};
      double eta = beta[0];
      for (std::size_t j = 0; j < p; ++j) {
        row.push_back(z(gen));
        eta += beta[j + 1] * row.back();
      }
      x.push_back(row);
      y.push_back(u(gen) < 1.0 / (1.0 + std::exp(-eta)) ? 1.0 : 0.0);
    }

    std::vector<std::vector<std::optional<double>>> cols(p, std::vector<std::optional<double>>(n));
    std::vector<std::optional<double>> yo(n);
    std::vector<std::string> names;
    for (std::size_t j = 0; j < p; ++j) names.push_back("x" + std::to_string(j));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < p; ++j) cols[j][i] = x[i][j + 1];
      yo[i] = y[i];
    }
    auto fit = econometrics::fit_logit(econometrics::DesignMatrix::from_columns(names, cols, yo));
    auto ref = testing::logit_brute_force(x, y);
    c.expect(fit.converged, "trial " + std::to_string(trial) + " did not converge");
    std::vector<double> b;
    for (std::size_t k = 0; k <= p; ++k) {
      b.push_back(fit.coefficients[k].estimate);
      worst = std::max(worst, std::abs(b[k] - ref[k]));
    }
    // Score X'(y - p) at the reported estimate.
    for (std::size_t k = 0; k <= p; ++k) {
      double g = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double eta = 0.0;
        for (std::size_t j = 0; j <= p; ++j) eta += x[i][j] * b[j];
        g += x[i][k] * (y[i] - 1.0 / (1.0 + std::exp(-eta)));
      }
      worst_grad = std::max(worst_grad, std::abs(g));
    }
  }
  c.expect(worst <= 1e-4, "max coefficient gap " + fmt("%.3g", worst));
  c.expect(worst_grad < 1e-6, "max gradient " + fmt("%.3g", worst_grad));
  return finish(c, "20 datasets, max gap " + fmt("%.2g", worst) + ", max gradient " + fmt("%.2g", worst_grad));
}

Outcome factor_oracle() {
  Checker c;
  auto u = testing::twelve_stock_universe();
  auto rows = testing::to_rows(u);
  auto rf = testing::rf_for(rows, 0.0001);
  auto built = factormodel::construct_factors(factormodel::SecurityPanel(rows), rf);
  auto oracle = testing::oracle_factors(u, rf);
  c.expect(built.series.days.size() == oracle.size() && !oracle.empty(), "date count mismatch");
  c.expect(built.degenerate_spreads == 0, "empty portfolio legs");
  double worst = 0.0;
  for (std::size_t i = 0; i < std::min(oracle.size(), built.series.days.size()); ++i) {
    const auto& f = built.series.days[i];
    c.expect(built.series.calendar[i] == oracle[i].date, "date " + oracle[i].date.iso());
    for (double d : {f.rmrf - oracle[i].rmrf, f.smb - oracle[i].smb, f.hml - oracle[i].hml, f.rmw - oracle[i].rmw,
                     f.cma - oracle[i].cma})
      worst = std::max(worst, std::abs(d));
  }
  c.expect(worst <= 1e-12, "max gap " + fmt("%.3g", worst));

  auto same = testing::identical_stocks();
  auto flat = factormodel::construct_factors(factormodel::SecurityPanel(same), testing::rf_for(same, 0.0));
  for (const auto& d : flat.series.days)
    c.expect(d.smb == 0.0 && d.hml == 0.0 && d.rmw == 0.0 && d.cma == 0.0, "identical stocks not exactly zero");
  return finish(c, std::to_string(oracle.size()) + " dates, max gap " + fmt("%.2g", worst) +
                       "; identical stocks give exact zeros");
}

// Pooled J- CAAR(-20, 5) from the pipeline's eventstudy.csv.
double negative_caar(const fs::path& out) {
  auto t = read_csv(out / "eventstudy.csv");
  const auto g = t.column("group"), d = t.column("relative_day"), v = t.column("caar");
  for (const auto& r : t.rows)
    if (r.fields[g] == "J-[-20,20]" && r.fields[d] == "5") return cell_double(t, r, v);
  throw std::runtime_error("no J-[-20,20] day 5 row in " + out.string());
}

Outcome event_recovery() {
  Checker c;
  testing::TempDir dir("accept_events");
  std::string detail;
  for (double effect : {-50.0, 0.0}) {
    std::vector<double> caar;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      synthetic::SynthConfig cfg;
      cfg.seed = seed;
      cfg.planted_event_effect_bps = effect;
      auto tag = dir.path() / ((effect == 0.0 ? "null_" : "eff_") + std::to_string(seed));
      auto out = run_synthetic(cfg, tag, {Stage::kIngest, Stage::kSentiment, Stage::kFactors, Stage::kEventStudy});
      caar.push_back(negative_caar(out));
      fs::remove_all(tag);
    }
    double mean = 0.0, ss = 0.0;
    for (double v : caar) mean += v;
    mean /= static_cast<double>(caar.size());
    for (double v : caar) ss += (v - mean) * (v - mean);
    const double se = std::sqrt(ss / static_cast<double>(caar.size() - 1)) / std::sqrt(static_cast<double>(caar.size()));
    // Six days at -50 bps.
    const double target = effect * 1e-4 * 6.0;
    const double z = (mean - target) / se;
    c.expect(std::abs(z) <= 3.0, (effect == 0.0 ? "null" : "planted") + std::string(" mean ") + fmt("%.4f", mean) +
                                     " is " + fmt("%.2f", z) + " SE from " + fmt("%.3f", target));
    detail += (detail.empty() ? "" : "; ") + std::string(effect == 0.0 ? "null" : "planted") + " mean " +
              fmt("%.4f", mean) + " (SE " + fmt("%.4f", se) + ", z " + fmt("%.2f", z) + ")";
  }
  return finish(c, "20 seeds: " + detail);
}

Outcome caar_identities() {
  Checker c;
  std::size_t paths_checked = 0, days_checked = 0;
  for (std::uint64_t seed : {3, 8, 13}) {
    synthetic::SynthConfig cfg;
    cfg.seed = seed;
    auto data = synthetic::gen_dataset(cfg);
    auto panel = data.panel();
    std::vector<sentiment::StockSentimentEvent> events;
    for (const auto& e : data.truth.events) events.push_back({e.firm_id, e.date, e.score, e.polarity});
    eventstudy::EventStudyConfig es;
    auto out = eventstudy::run_event_study(events, panel, data.factors, es);

    // AR = excess return - fitted value, recomputed from panel rows and the
    // reported exposures. Paths follow the canonical (firm, date) event order.
    std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
      return std::tie(a.firm_id, a.announce_date, a.sentiment) < std::tie(b.firm_id, b.announce_date, b.sentiment);
    });
    const auto& cal = data.factors.calendar;
    const auto& fd = data.factors.days;
    std::map<sentiment::Polarity, std::size_t> cursor;
    for (const auto& ev : events) {
      const bool excluded = std::any_of(out.exclusions.begin(), out.exclusions.end(), [&](const auto& x) {
        return x.firm_id == ev.firm_id && x.announce_date == ev.announce_date;
      });
      if (excluded) continue;
      const auto& g = ev.polarity == sentiment::Polarity::kPositive ? out.positive : out.negative;
      const std::size_t k = cursor[ev.polarity]++;
      const auto& est = g.estimates[k];
      const auto& path = g.paths[k];
      c.expect(est.firm_id == ev.firm_id, "path order");
      const auto it = std::lower_bound(cal.dates().begin(), cal.dates().end(), ev.announce_date);
      const auto idx = static_cast<std::size_t>(it - cal.dates().begin());
      const auto firm = *panel.firm_index(ev.firm_id);
      for (int rel = path.start; rel <= path.end(); ++rel) {
        const std::size_t i = idx + rel;
        const auto pd = i < cal.size() ? panel.calendar().index_of(cal[i]) : std::nullopt;
        const auto* row = pd ? panel.find(firm, *pd) : nullptr;
        if (!row || i == 0 || i + 1 >= fd.size()) {
          c.expect(!path.at(rel), "AR defined without data");
          continue;
        }
        double fitted = est.alpha;
        for (std::size_t f = 0; f < 5; ++f)
          for (int s = -1; s <= 1; ++s) fitted += est.slopes[eventstudy::slope_index(f, s)] * fd[i + s].factors()[f];
        const double ar = (row->daily_return - fd[i].rf) - fitted;
        c.expect(path.at(rel) == ar, "AR identity at " + ev.firm_id + " day " + std::to_string(rel));
      }
      ++paths_checked;
    }

    for (const auto* g : {&out.positive, &out.negative}) {
      if (g->empty()) continue;
      const auto& full = *g->full;
      for (std::size_t k = 0; k < full.aar.size(); ++k) {
        const int day = full.relative_day(k);
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& p : g->paths)
          if (auto v = p.at(day)) {
            sum += *v;
            ++n;
          }
        c.expect(n == full.n_events[k], "AAR count");
        c.expect(n > 0 && full.aar[k] == sum / static_cast<double>(n), "AAR is the cross-sectional mean");
        // CAAR telescopes: each step adds exactly that day's AAR.
        c.expect(full.caar[k] == (k ? full.caar[k - 1] : 0.0) + *full.aar[k], "CAAR step");
        ++days_checked;
      }
      const auto& sub = *g->sub;
      for (std::size_t k = 0; k < sub.aar.size(); ++k) {
        c.expect(sub.aar[k] == full.aar[static_cast<std::size_t>(sub.relative_day(k) - full.t0)], "sub-window AAR");
        c.expect(sub.caar[k] == (k ? sub.caar[k - 1] : 0.0) + *sub.aar[k], "sub-window CAAR step");
      }
    }
  }

  // The same telescoping on the values written by a pipeline run.
  testing::TempDir dir("accept_identities");
  synthetic::SynthConfig cfg;
  cfg.seed = 4;
  auto out = run_synthetic(cfg, dir.path(), {Stage::kIngest, Stage::kSentiment, Stage::kFactors, Stage::kEventStudy});
  auto t = read_csv(out / "eventstudy.csv");
  const auto gcol = t.column("group"), aar = t.column("aar"), caar = t.column("caar");
  std::string group;
  double running = 0.0;
  for (const auto& r : t.rows) {
    if (r.fields[gcol] != group) {
      group = r.fields[gcol];
      running = 0.0;
    }
    if (!r.fields[aar].empty()) running += cell_double(t, r, aar);
    c.expect(cell_double(t, r, caar) == running, "eventstudy.csv CAAR step in " + group);
  }
  return finish(c, std::to_string(paths_checked) + " AR paths, " + std::to_string(days_checked) +
                       " pooled days and " + std::to_string(t.rows.size()) + " CSV rows exact");
}

std::vector<sentiment::SentimentObservation> series(const std::vector<double>& xs) {
  std::vector<sentiment::SentimentObservation> obs;
  for (std::size_t i = 0; i < xs.size(); ++i) obs.push_back({Date(2022, 8, 1).plus_days(static_cast<int>(i)), 1, 1, xs[i]});
  return obs;
}

Outcome signal_correctness() {
  Checker c;
  using timing::build_signal;
  using timing::WindowMode;
  // Trailing means, N = 3: day 4 (0.3) vs 0.2 -> 1, day 5 (0.3) vs 0.133 -> 1,
  // day 6 (0.9) vs 0.5 -> 1, day 7 (-0.4) vs 0.267 -> 0, day 8 (0.0) vs 0.167 -> 0,
  // day 9 (0.6) vs 0.067 -> 1, day 10 (0.2) vs 0.267 -> 0.
  const std::vector<double> ten{0.1, 0.5, -0.2, 0.3, 0.3, 0.9, -0.4, 0.0, 0.6, 0.2};
  c.expect(build_signal(series(ten), 3).values == std::vector<int>{1, 1, 1, 0, 0, 1, 0}, "N=3 hand values");
  // N = 5: 0.9 vs 0.36, -0.4 vs 0.22, 0.0 vs 0.22, 0.6 vs 0.28, 0.2 vs 0.26.
  c.expect(build_signal(series(ten), 5).values == std::vector<int>{1, 0, 0, 1, 0}, "N=5 hand values");

  for (int n : {1, 3, 5, 10})
    for (auto mode : {WindowMode::kInclusive, WindowMode::kExclusive}) {
      auto s = build_signal(series(std::vector<double>(25, -0.35)), n, mode);
      c.expect(!s.values.empty() && std::all_of(s.values.begin(), s.values.end(), [](int v) { return v == 0; }),
               "constant series N=" + std::to_string(n));
    }

  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0), scale(0.1, 5.0);
  std::size_t compared = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> xs(80), ys(80), qs(80), qys(80);
    const double a = scale(gen), b = u(gen);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      xs[i] = u(gen);
      ys[i] = a * xs[i] + b;
      // Ties survive only exact transforms: power-of-two scale, dyadic shift.
      qs[i] = std::round(xs[i] * 4.0) / 4.0;
      qys[i] = std::ldexp(qs[i], trial % 6) + std::round(b * 32.0) / 32.0;
    }
    for (int n : {3, 5, 10, 20})
      for (auto mode : {WindowMode::kInclusive, WindowMode::kExclusive}) {
        c.expect(build_signal(series(xs), n, mode).values == build_signal(series(ys), n, mode).values,
                 "affine trial " + std::to_string(trial));
        c.expect(build_signal(series(qs), n, mode).values == build_signal(series(qys), n, mode).values,
                 "dyadic trial " + std::to_string(trial));
        compared += 2;
      }
  }
  return finish(c, "hand values N=3,5; constant series; " + std::to_string(compared) + " affine comparisons");
}

timing::MarketSeries market_of(const std::vector<double>& r) {
  timing::MarketSeries m;
  std::vector<Date> d;
  for (std::size_t i = 0; i < r.size(); ++i) d.push_back(Date(2022, 8, 1).plus_days(static_cast<int>(i)));
  m.calendar = TradingCalendar(d);
  m.values = r;
  return m;
}

Outcome backtest_identities() {
  Checker c;
  std::mt19937_64 gen(31);
  std::normal_distribution<double> z(0.0, 0.012);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> r(300);
    for (auto& v : r) v = z(gen);
    auto market = market_of(r);

    std::vector<std::optional<int>> ones(r.size(), 1);
    auto always = timing::backtest_positions(ones, market);
    c.expect(always.outperformance == 0.0, "S = 1 outperformance");

    std::vector<std::optional<int>> s(r.size()), comp(r.size());
    for (std::size_t i = 2; i < r.size(); ++i) {
      s[i] = static_cast<int>(gen() % 2);
      comp[i] = 1 - *s[i];
    }
    auto a = timing::backtest_positions(s, market), b = timing::backtest_positions(comp, market);
    c.expect(a.strategy_returns.size() == b.strategy_returns.size(), "complement length");
    for (std::size_t i = 0; i < std::min(a.strategy_returns.size(), b.strategy_returns.size()); ++i)
      c.expect(a.strategy_returns[i] == -b.strategy_returns[i], "complement negation");

    // Content on day i sees the sign of the return two trading days later.
    timing::SignalSeries sig;
    sig.n = 1;
    for (std::size_t i = 0; i + 2 < r.size(); ++i) {
      sig.dates.push_back(market.calendar[i]);
      sig.values.push_back(r[i + 2] > 0 ? 1 : 0);
    }
    auto pf = timing::backtest_strategy(sig, market, 2);
    long double prod = 1.0L;
    for (std::size_t i = 2; i < r.size(); ++i) {
      prod *= 1.0L + std::fabs(r[i]);
      worst = std::max(worst, std::abs(pf.strategy_equity[i - 2] - static_cast<double>(prod - 1.0L)));
    }
  }
  c.expect(worst <= 1e-12, "perfect foresight gap " + fmt("%.3g", worst));
  return finish(c, "20 series; perfect-foresight max gap " + fmt("%.2g", worst));
}

Outcome slope_recovery() {
  Checker c;
  testing::TempDir dir("accept_slope");
  int covered = 0;
  std::string misses;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    synthetic::SynthConfig cfg;
    cfg.seed = seed;
    cfg.n_days = 1000;
    cfg.n_firms = 30;
    auto tag = dir.path() / std::to_string(seed);
    auto out = run_synthetic(cfg, tag, {Stage::kIngest, Stage::kSentiment, Stage::kFactors, Stage::kRegress});
    auto t = read_csv(out / "regression.csv");
    const auto spec = t.column("spec"), term = t.column("term"), est = t.column("estimate"), se = t.column("std_err");
    bool found = false;
    for (const auto& r : t.rows)
      if (r.fields[spec] == "logit1" && r.fields[term].rfind("S(", 0) == 0) {
        found = true;
        const double b = cell_double(t, r, est), s = cell_double(t, r, se);
        if (std::abs(b - cfg.planted_signal_strength) <= 2.0 * s)
          ++covered;
        else
          misses += " seed " + std::to_string(seed) + " (" + fmt("%.3f", b) + " +/- " + fmt("%.3f", s) + ")";
      }
    c.expect(found, "no signal row for seed " + std::to_string(seed));
    fs::remove_all(tag);
  }
  c.expect(covered >= 18, std::to_string(covered) + "/20 within 2 SE;" + misses);
  return finish(c, std::to_string(covered) + "/20 seeds within 2 SE of 0.8" + (misses.empty() ? "" : ";" + misses));
}

// Relative path -> content for every regular file under `root`.
std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = read_text_file(e.path());
  return files;
}

Outcome determinism(const fs::path& keep) {
  Checker c;
  synthetic::SynthConfig cfg;
  cfg.seed = 42;
  run_synthetic(cfg, keep / "a", {Stage::kAll});
  run_synthetic(cfg, keep / "b", {Stage::kAll});
  auto a = snapshot(keep / "a"), b = snapshot(keep / "b");
  c.expect(a.size() == b.size(), "file counts differ");
  std::size_t outputs = 0;
  for (const auto& [name, content] : a) {
    auto it = b.find(name);
    c.expect(it != b.end() && it->second == content, name + " differs");
    outputs += name.rfind("out/", 0) == 0;
  }
  c.expect(outputs >= 19, "only " + std::to_string(outputs) + " outputs");
  return finish(c, std::to_string(a.size()) + " files (" + std::to_string(outputs) + " outputs) byte-identical");
}

std::vector<std::string> words(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> w;
  for (std::string s; is >> s;) w.push_back(s);
  return w;
}

Outcome reference_format(const fs::path& out) {
  Checker c;
  auto text = read_text_file(out / "regression.txt");
  std::vector<std::string> lines;
  for (std::istringstream is(text); !is.eof();) {
    std::string l;
    std::getline(is, l);
    lines.push_back(l);
  }

  auto t = read_csv(out / "regression.csv");
  const auto spec = t.column("spec"), term = t.column("term"), est = t.column("estimate"), tv = t.column("t_value");
  std::map<std::string, std::vector<std::pair<double, double>>> by_spec;  // slopes in row order
  for (const auto& r : t.rows)
    if (r.fields[term] != econometrics::kInterceptTerm)
      by_spec[r.fields[spec]].push_back({cell_double(t, r, est), cell_double(t, r, tv)});
  c.expect(by_spec.size() == 5, "regression.csv has " + std::to_string(by_spec.size()) + " specifications");

  // Header names the four regressors in column order.
  auto header = std::find_if(lines.begin(), lines.end(), [](const auto& l) { return l.find("S(10, t-2)") != std::string::npos; });
  c.expect(header != lines.end(), "header row");
  if (header != lines.end())
    for (const char* col : {"ΔNSI(t)", "PctZero(t)", "R_f(t)"})
      c.expect(header->find(col) != std::string::npos, std::string("header lacks ") + col);

  for (int k = 1; k <= 5; ++k) {
    const std::string label = "Logit Regression" + std::to_string(k);
    auto it = std::find_if(lines.begin(), lines.end(), [&](const auto& l) { return l.rfind(label, 0) == 0; });
    c.expect(it != lines.end() && it + 1 != lines.end(), "missing row " + label);
    if (it == lines.end() || it + 1 == lines.end()) continue;
    const auto& expected = by_spec["logit" + std::to_string(k)];
    // Estimate row: label words, one estimate per term, n_obs. T-value row: "(t)" per term.
    auto w = words(it->substr(label.size()));
    auto tw = words(*(it + 1));
    c.expect(w.size() == expected.size() + 1, label + " estimate count");
    c.expect(tw.size() == expected.size(), label + " t-value count");
    for (std::size_t j = 0; j < expected.size() && j < w.size() && j < tw.size(); ++j) {
      c.expect(w[j] == fmt("%.2f", expected[j].first), label + " estimate " + w[j]);
      c.expect(tw[j] == "(" + fmt("%.2f", expected[j].second) + ")", label + " t-value " + tw[j]);
    }
  }

  // Event-study CSV carries both windows for both groups.
  auto es = read_csv(out / "eventstudy.csv", {"group", "relative_day", "aar", "caar", "n_events"});
  std::map<std::string, std::vector<int>> days;
  for (const auto& r : es.rows) days[r.fields[0]].push_back(std::stoi(r.fields[1]));
  for (const std::string g : {"J+", "J-"}) {
    std::vector<int> full, sub;
    for (int d = -20; d <= 20; ++d) full.push_back(d);
    for (int d = 0; d <= 20; ++d) sub.push_back(d);
    c.expect(days[g + "[-20,20]"] == full, g + "[-20,20] rows");
    c.expect(days[g + "[0,20]"] == sub, g + "[0,20] rows");
  }
  return finish(c, "five specifications with estimate and (t) rows; [-20,20] and [0,20] windows for J+ and J-");
}

}  // namespace

int main() {
  testing::TempDir shared("accept_shared");
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // 0 = no limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "sentiment exactness", 1.0, sentiment_exactness},
      {2, "OLS oracle equivalence", 10.0, ols_oracle},
      {3, "logit oracle equivalence", 30.0, logit_oracle},
      {4, "factor-construction oracle", 0.0, factor_oracle},
      {5, "event-study recovery", 120.0, event_recovery},
      {6, "CAAR and abnormal-return identities", 0.0, caar_identities},
      {7, "signal correctness", 0.0, signal_correctness},
      {8, "backtest identities", 0.0, backtest_identities},
      {9, "timing-regression recovery", 0.0, slope_recovery},
      {10, "determinism", 0.0, [&] { return determinism(shared.path()); }},
      {11, "reference-format conformance", 0.0, [&] { return reference_format(shared.path() / "a" / "out"); }},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cr.limit_seconds > 0 && secs >= cr.limit_seconds) {
      o.pass = false;
      o.detail += "; took " + fmt("%.2f", secs) + " s, limit " + fmt("%.0f", cr.limit_seconds) + " s";
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << cr.id << ": " << cr.name << " (" << o.detail << ", "
              << fmt("%.2f", secs) << " s)" << std::endl;
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
