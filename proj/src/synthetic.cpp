#include "infocontent/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "infocontent/csv.hpp"
#include "infocontent/error.hpp"
#include "infocontent/timing.hpp"

namespace infocontent::synthetic {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal(double mean, double sd) {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("Rng::below(0)");
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

void SynthConfig::validate() const {
  if (n_firms < 12) throw InvalidArgument("synth: n_firms must be >= 12 for factor construction");
  if (n_days == 0) throw InvalidArgument("synth: n_days must be positive");
  if (illiquid_share < 0.0 || illiquid_share >= 0.5) throw InvalidArgument("synth: illiquid_share must be in [0, 0.5)");
  if (effect_start > effect_end) throw InvalidArgument("synth: effect_start > effect_end");
  if (signal_n <= 0 || signal_lag < 0) throw InvalidArgument("synth: signal_n > 0 and signal_lag >= 0 required");
  if (min_mentions == 0) throw InvalidArgument("synth: min_mentions must be >= 1");
  if (lexicon_positive == 0 || lexicon_negative == 0 || filler_vocabulary == 0)
    throw InvalidArgument("synth: lexicon and filler vocabularies must be non-empty");
  if (n_event_days > 0 && n_days < 320)
    throw InvalidArgument("synth: events need n_days >= 320 for estimation and event windows");
  for (double v : factor_vol)
    if (!(v > 0.0)) throw InvalidArgument("synth: factor volatilities must be positive");
}

namespace {

constexpr int kFirstEventIndex = 280;  // 273 estimation days plus one lag
constexpr int kEventTailDays = 25;     // 20 post-event days plus one lead

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::string numbered(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%03zu", prefix, i);
  return buf;
}

struct Characteristics {
  double book_equity, operating_income, total_assets, total_assets_prior;
};

}  // namespace

SyntheticDataset gen_dataset(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  SyntheticDataset out;
  out.truth.config = config;

  // Trading calendar: weekdays minus random holidays.
  std::vector<Date> trading;
  for (Date d = config.start; trading.size() < config.n_days; d = d.plus_days(1))
    if (!d.is_weekend() && !rng.bernoulli(config.holiday_prob)) trading.push_back(d);
  const TradingCalendar calendar(trading);
  const std::size_t n_days = calendar.size();

  // Firms.
  const auto n_illiquid = static_cast<std::size_t>(std::round(config.illiquid_share * config.n_firms));
  const std::size_t n_liquid = config.n_firms - n_illiquid;
  if (n_liquid < config.firms_per_event_day) throw InvalidArgument("synth: too few liquid firms");
  std::vector<double> base_cap(config.n_firms), base_bm(config.n_firms), base_op(config.n_firms),
      base_inv(config.n_firms);
  for (std::size_t j = 0; j < config.n_firms; ++j) {
    PlantedFirm f;
    f.firm_id = numbered("F", j);
    f.exchange = j % 3 == 2 ? "secondary" : "main";
    f.illiquid = j >= n_liquid;
    f.alpha = rng.normal(0.0, 0.0002);
    f.betas = {rng.uniform(0.6, 1.4), rng.normal(0.0, 0.5), rng.normal(0.0, 0.5), rng.normal(0.0, 0.3),
               rng.normal(0.0, 0.3)};
    base_cap[j] = std::exp(rng.normal(std::log(1e11), 1.0));
    base_bm[j] = std::exp(rng.normal(std::log(0.8), 0.5));
    base_op[j] = rng.normal(0.12, 0.08);
    base_inv[j] = std::max(-0.4, rng.normal(0.08, 0.1));
    out.truth.firms.push_back(f);
    out.firms.push_back({f.firm_id, {numbered("FIRM", j), numbered("Firm", j) + "Holdings"}});
  }
  out.firms.push_back({"F_SUN", {"SUN"}});
  out.exclusions.insert("SUN");

  // Annual accounting characteristics per firm.
  const int first_year = static_cast<int>(calendar[0].ymd().year());
  const int last_year = static_cast<int>(calendar[n_days - 1].ymd().year());
  std::vector<std::vector<Characteristics>> accounting(config.n_firms);
  for (std::size_t j = 0; j < config.n_firms; ++j)
    for (int y = first_year; y <= last_year; ++y) {
      const double be = base_cap[j] * base_bm[j] * std::exp(rng.normal(0.0, 0.1));
      const double ta = 2.0 * be;
      accounting[j].push_back({be, be * (base_op[j] + rng.normal(0.0, 0.02)), ta,
                               ta / (1.0 + base_inv[j] + rng.normal(0.0, 0.02))});
    }

  // Non-market factors.
  std::vector<std::array<double, 5>> factor_draws(n_days);
  for (std::size_t t = 0; t < n_days; ++t)
    for (std::size_t k = 1; k < 5; ++k) factor_draws[t][k] = rng.normal(0.0, config.factor_vol[k]);

  // Content dates: every trading date, plus some weekends and holidays.
  std::vector<Date> content_dates;
  for (Date d = calendar[0]; d <= calendar[n_days - 1]; d = d.plus_days(1))
    if (calendar.index_of(d) || rng.bernoulli(config.weekend_script_prob)) content_dates.push_back(d);

  // Polarity counts from a persistent latent tone.
  std::vector<sentiment::SentimentObservation> obs;
  std::vector<double> latent;
  double tone = 0.0;
  for (const auto& d : content_dates) {
    tone = 0.6 * tone + rng.normal(0.0, 0.8);
    latent.push_back(tone);
    sentiment::SentimentObservation o{d, 0, 0, std::nullopt};
    if (!rng.bernoulli(config.silent_day_prob)) {
      const std::size_t m = 6 + rng.below(9);
      const double p_pos = 0.5 * (1.0 + std::tanh(tone));
      for (std::size_t i = 0; i < m; ++i) (rng.bernoulli(p_pos) ? o.n_positive : o.n_negative)++;
    }
    obs.push_back(o);
  }

  // Event days, evenly spaced on trading dates with room for both windows.
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> event_days;  // trading idx, firms
  if (config.n_event_days > 0) {
    const int lo = kFirstEventIndex, hi = static_cast<int>(n_days) - kEventTailDays;
    if (hi <= lo) throw InvalidArgument("synth: n_days too small to place events");
    std::size_t slot = 0;
    for (std::size_t k = 0; k < config.n_event_days; ++k) {
      const auto idx = static_cast<std::size_t>(lo + static_cast<long long>(k) * (hi - lo) /
                                                         static_cast<long long>(config.n_event_days));
      std::vector<std::size_t> firms;
      for (std::size_t f = 0; f < config.firms_per_event_day; ++f) firms.push_back(slot++ % n_liquid);
      event_days.emplace_back(idx, firms);
    }
  }
  std::vector<std::size_t> event_content(event_days.size());
  for (std::size_t k = 0; k < event_days.size(); ++k) {
    const Date& d = calendar[event_days[k].first];
    const auto c = static_cast<std::size_t>(
        std::lower_bound(content_dates.begin(), content_dates.end(), d) - content_dates.begin());
    event_content[k] = c;
    auto& o = obs[c];
    if (o.n_positive == o.n_negative) (latent[c] >= 0.0 ? o.n_positive : o.n_negative)++;
  }
  for (auto& o : obs) o.score = sentiment::polarity_score(o.n_positive, o.n_negative);
  out.truth.sentiment = obs;

  // Per trading day effect additions, [firm][day].
  std::vector<std::vector<double>> effect(config.n_firms, std::vector<double>(n_days, 0.0));
  for (std::size_t k = 0; k < event_days.size(); ++k) {
    const auto& o = obs[event_content[k]];
    const auto polarity = *o.score > 0 ? sentiment::Polarity::kPositive : sentiment::Polarity::kNegative;
    const double per_day = polarity == sentiment::Polarity::kNegative ? config.planted_event_effect_bps * 1e-4 : 0.0;
    for (auto j : event_days[k].second) {
      out.truth.events.push_back({out.truth.firms[j].firm_id, o.date, polarity, *o.score, per_day});
      for (int rel = config.effect_start; rel <= config.effect_end; ++rel) {
        const long long t = static_cast<long long>(event_days[k].first) + rel;
        if (t >= 0 && t < static_cast<long long>(n_days)) effect[j][static_cast<std::size_t>(t)] += per_day;
      }
    }
  }

  // Market excess return: sign planted on the lagged signal, magnitude |N|.
  const auto signal = timing::build_signal(obs, config.signal_n);
  const auto lagged = timing::lag_signal(timing::align_signal(signal, calendar), config.signal_lag);
  out.factors.calendar = calendar;
  for (std::size_t t = 0; t < n_days; ++t) {
    const double p_up = lagged[t] ? logistic(config.signal_intercept + config.planted_signal_strength * *lagged[t])
                                  : 0.5;
    const bool up = rng.bernoulli(p_up);
    const double magnitude = std::abs(rng.normal(0.0, config.factor_vol[0])) + 1e-6;
    factor_draws[t][0] = up ? magnitude : -magnitude;
    factormodel::FactorDay fd{factor_draws[t][0], factor_draws[t][1], factor_draws[t][2],
                              factor_draws[t][3], factor_draws[t][4], config.rf_daily};
    out.factors.days.push_back(fd);
    out.rf[calendar[t]] = config.rf_daily;
  }

  // Panel.
  std::vector<double> cap = base_cap;
  for (std::size_t t = 0; t < n_days; ++t) {
    const double zero_p = config.zero_return_prob * rng.uniform(0.5, 1.5);
    const auto year_idx = static_cast<std::size_t>(static_cast<int>(calendar[t].ymd().year()) - first_year);
    for (std::size_t j = 0; j < config.n_firms; ++j) {
      const auto& f = out.truth.firms[j];
      double r = config.rf_daily + f.alpha + effect[j][t];
      for (std::size_t k = 0; k < 5; ++k) r += f.betas[k] * factor_draws[t][k];
      const double eps = rng.normal(0.0, config.idio_vol);
      const bool zero = rng.bernoulli(zero_p);
      if (!config.noise_free) {
        r += eps;
        if (f.illiquid && zero) r = 0.0;
      }
      r = std::max(r, -0.95);
      const auto& acc = accounting[j][year_idx];
      out.panel_rows.push_back({f.firm_id, calendar[t], r, cap[j], f.exchange, acc.book_equity,
                                acc.operating_income, acc.total_assets, acc.total_assets_prior});
      cap[j] *= 1.0 + r;
    }
  }

  // Controls: NSI on every calendar day, short rate on trading days.
  double nsi = 100.0, rate = 3.0;
  for (Date d = calendar[0]; d <= calendar[n_days - 1]; d = d.plus_days(1)) {
    nsi += rng.normal(0.0, 1.0);
    out.nsi[d] = nsi;
  }
  for (std::size_t t = 0; t < n_days; ++t) {
    rate += rng.normal(0.0, 0.01);
    out.short_rate[calendar[t]] = rate;
  }

  // Lexicon.
  for (std::size_t i = 0; i < config.lexicon_positive; ++i) out.lexicon_positive.push_back(numbered("pos", i));
  for (std::size_t i = 0; i < config.lexicon_negative; ++i) out.lexicon_negative.push_back(numbered("neg", i));

  // Transcripts.
  std::vector<std::vector<std::size_t>> mentions_on(content_dates.size());
  for (std::size_t k = 0; k < event_days.size(); ++k) mentions_on[event_content[k]] = event_days[k].second;
  std::size_t content_serial = 0;
  for (std::size_t c = 0; c < content_dates.size(); ++c) {
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < config.filler_tokens; ++i)
      tokens.push_back(numbered("w", rng.below(config.filler_vocabulary)));
    for (std::size_t i = 0; i < obs[c].n_positive; ++i)
      tokens.push_back(out.lexicon_positive[rng.below(out.lexicon_positive.size())]);
    for (std::size_t i = 0; i < obs[c].n_negative; ++i)
      tokens.push_back(out.lexicon_negative[rng.below(out.lexicon_negative.size())]);
    for (auto j : mentions_on[c]) {
      const std::size_t count = config.min_mentions + rng.below(3);
      for (std::size_t i = 0; i < count; ++i) tokens.push_back(out.firms[j].names[rng.below(2)]);
    }
    if (config.min_mentions > 1 && rng.bernoulli(0.5)) {
      const std::size_t j = rng.below(n_liquid);
      const bool already = std::find(mentions_on[c].begin(), mentions_on[c].end(), j) != mentions_on[c].end();
      const std::size_t count = 1 + rng.below(config.min_mentions - 1);
      if (!already)
        for (std::size_t i = 0; i < count; ++i) tokens.push_back(out.firms[j].names[0]);
    }
    if (rng.bernoulli(0.2)) {
      for (int i = 0; i < 3; ++i) tokens.push_back("SUN");
      out.truth.excluded_name_occurrences += 3;
    }
    for (std::size_t i = tokens.size(); i > 1; --i) std::swap(tokens[i - 1], tokens[rng.below(i)]);
    for (auto& tok : tokens)
      if (rng.bernoulli(0.1)) tok += rng.bernoulli(0.5) ? "," : ".";

    const std::size_t split =
        tokens.size() > 1 && rng.bernoulli(0.3) ? 1 + rng.below(tokens.size() - 1) : tokens.size();
    auto join = [&](std::size_t from, std::size_t to) {
      std::string text;
      for (std::size_t i = from; i < to; ++i) text += (i > from ? " " : "") + tokens[i];
      return text;
    };
    out.transcripts.push_back({numbered("vid", content_serial++), content_dates[c], join(0, split)});
    if (split < tokens.size())
      out.transcripts.push_back({numbered("vid", content_serial++), content_dates[c], join(split, tokens.size())});
  }
  return out;
}

namespace {

nlohmann::ordered_json truth_json(const GroundTruth& truth) {
  const auto& c = truth.config;
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  j["n_firms"] = c.n_firms;
  j["n_days"] = c.n_days;
  j["start"] = c.start.iso();
  j["factor_vol"] = c.factor_vol;
  j["rf_daily"] = c.rf_daily;
  j["idio_vol"] = c.noise_free ? 0.0 : c.idio_vol;
  j["planted_event_effect_bps"] = c.planted_event_effect_bps;
  j["effect_window"] = {c.effect_start, c.effect_end};
  j["planted_signal_strength"] = c.planted_signal_strength;
  j["signal_intercept"] = c.signal_intercept;
  j["signal_n"] = c.signal_n;
  j["signal_lag"] = c.signal_lag;
  j["min_mentions"] = c.min_mentions;
  j["excluded_name_occurrences"] = truth.excluded_name_occurrences;
  auto& firms = j["firms"] = nlohmann::ordered_json::array();
  for (const auto& f : truth.firms)
    firms.push_back({{"firm_id", f.firm_id},
                     {"exchange", f.exchange},
                     {"illiquid", f.illiquid},
                     {"alpha", f.alpha},
                     {"betas", f.betas}});
  auto& events = j["events"] = nlohmann::ordered_json::array();
  for (const auto& e : truth.events)
    events.push_back({{"firm_id", e.firm_id},
                      {"date", e.date.iso()},
                      {"polarity", sentiment::to_string(e.polarity)},
                      {"score", e.score},
                      {"effect", e.effect}});
  return j;
}

template <typename Fn>
void write_with(const std::filesystem::path& path, Fn&& fn) {
  std::ostringstream os;
  fn(os);
  write_text_file(path, os.str());
}

void write_series(const std::filesystem::path& path, const char* column, const factormodel::DatedSeries& s) {
  write_with(path, [&](std::ostream& os) {
    CsvWriter w(os);
    w.header({"date", column});
    for (const auto& [d, v] : s) {
      w.field(d.iso()).field(v);
      w.end_row();
    }
  });
}

}  // namespace

std::vector<std::string> write_dataset(const SyntheticDataset& data, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  write_with(dir / "transcripts.csv", [&](std::ostream& os) {
    CsvWriter w(os);
    w.header({"content_id", "publish_date", "text"});
    for (const auto& r : data.transcripts) {
      w.field(r.content_id).field(r.publish_date.iso()).field(r.text);
      w.end_row();
    }
  });
  write_with(dir / "firms.csv", [&](std::ostream& os) {
    CsvWriter w(os);
    w.header({"firm_id", "name"});
    for (const auto& e : data.firms)
      for (const auto& n : e.names) {
        w.field(e.firm_id).field(n);
        w.end_row();
      }
  });
  write_with(dir / "exclusions.txt", [&](std::ostream& os) {
    for (const auto& e : data.exclusions) os << e << '\n';
  });
  write_with(dir / "lexicon_positive.txt", [&](std::ostream& os) {
    for (const auto& e : data.lexicon_positive) os << e << '\n';
  });
  write_with(dir / "lexicon_negative.txt", [&](std::ostream& os) {
    for (const auto& e : data.lexicon_negative) os << e << '\n';
  });
  write_with(dir / "panel.csv", [&](std::ostream& os) {
    CsvWriter w(os);
    w.header({"firm_id", "date", "daily_return", "market_cap", "exchange", "book_equity", "operating_income",
              "total_assets", "total_assets_prior"});
    for (const auto& r : data.panel_rows) {
      w.field(r.firm_id).field(r.date.iso()).field(r.daily_return).field(r.market_cap).field(r.exchange);
      w.field(r.book_equity).field(r.operating_income).field(r.total_assets).field(r.total_assets_prior);
      w.end_row();
    }
  });
  write_series(dir / "rf.csv", "rf", data.rf);
  write_with(dir / "factors.csv", [&](std::ostream& os) { factormodel::write_factors_csv(os, data.factors); });
  write_series(dir / "nsi.csv", "nsi", data.nsi);
  write_series(dir / "short_rate.csv", "short_rate", data.short_rate);
  write_text_file(dir / "ground_truth.json", truth_json(data.truth).dump(2) + "\n");

  const auto& c = data.truth.config;
  std::ostringstream cfg;
  cfg << "# Synthetic dataset, seed " << c.seed << "\n"
      << "transcripts = transcripts.csv\n"
      << "firms = firms.csv\n"
      << "exclusions = exclusions.txt\n"
      << "lexicon_positive = lexicon_positive.txt\n"
      << "lexicon_negative = lexicon_negative.txt\n"
      << "panel = panel.csv\n"
      << "risk_free = rf.csv\n"
      << "factors = factors.csv\n"
      << "nsi = nsi.csv\n"
      << "short_rate = short_rate.csv\n"
      << "min_mentions = " << c.min_mentions << "\n"
      << "regress_n = " << c.signal_n << "\n"
      << "lag = " << c.signal_lag << "\n";
  write_text_file(dir / "config.ini", cfg.str());

  return {"transcripts.csv", "firms.csv",   "exclusions.txt", "lexicon_positive.txt", "lexicon_negative.txt",
          "panel.csv",       "rf.csv",      "factors.csv",    "nsi.csv",              "short_rate.csv",
          "ground_truth.json", "config.ini"};
}

}  // namespace infocontent::synthetic
