#include "infocontent/pipeline.hpp"

#include <chrono>
#include <set>
#include <sstream>

#include <json.hpp>

#include "infocontent/corpus.hpp"
#include "infocontent/csv.hpp"
#include "infocontent/econometrics.hpp"
#include "infocontent/error.hpp"
#include "infocontent/eventstudy.hpp"
#include "infocontent/sentiment.hpp"
#include "infocontent/timing.hpp"
#include "infocontent/version.hpp"

namespace infocontent {

namespace fs = std::filesystem;

namespace {

constexpr Stage kOrder[] = {Stage::kIngest, Stage::kSentiment, Stage::kFactors,
                            Stage::kEventStudy, Stage::kTiming, Stage::kRegress};

// Writes `name` from a stream callback and records its data-row count.
template <typename Fn>
void emit(StageReport& report, const fs::path& dir, const std::string& name, Fn&& fn) {
  std::ostringstream os;
  fn(os);
  const std::string text = os.str();
  write_text_file(dir / name, text);
  std::size_t lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  report.rows[name] = lines > 0 ? lines - 1 : 0;
}

std::vector<corpus::TranscriptDay> read_days(const fs::path& path) {
  CsvTable t = read_csv(path, {"date", "source_count", "n_tokens", "tokens"});
  std::vector<corpus::TranscriptDay> days;
  for (const auto& row : t.rows) {
    corpus::TranscriptDay d;
    auto date = Date::parse(row.fields[0]);
    if (!date) throw ParseError(t.source, row.number, "date", "invalid date");
    d.date = *date;
    auto sc = parse_int(row.fields[1]);
    if (!sc || *sc < 0) throw ParseError(t.source, row.number, "source_count", "not a count");
    d.source_count = static_cast<std::size_t>(*sc);
    std::stringstream ss(row.fields[3]);
    std::string tok;
    while (std::getline(ss, tok, ' '))
      if (!tok.empty()) d.tokens.push_back(tok);
    days.push_back(std::move(d));
  }
  return days;
}

std::vector<corpus::MentionSet> read_mentions(const fs::path& path) {
  CsvTable t = read_csv(path, {"date", "firm_id", "count"});
  std::vector<corpus::MentionSet> sets;
  for (const auto& row : t.rows) {
    auto date = Date::parse(row.fields[0]);
    if (!date) throw ParseError(t.source, row.number, "date", "invalid date");
    auto count = parse_int(row.fields[2]);
    if (!count || *count <= 0) throw ParseError(t.source, row.number, "count", "not a positive count");
    if (sets.empty() || sets.back().date != *date) sets.push_back({*date, {}});
    sets.back().mentions.push_back({row.fields[1], static_cast<std::size_t>(*count)});
  }
  return sets;
}

// Rethrows as the same error type with `prefix` prepended.
[[noreturn]] void rethrow_with_context(const Error& e, const std::string& prefix) {
  const std::string what = prefix + e.what();
  switch (e.kind()) {
    case Error::Kind::kInvalidArgument: throw InvalidArgument(what);
    case Error::Kind::kIo: throw IoError(what);
    case Error::Kind::kParse: throw ParseError(what);
    case Error::Kind::kConfig: throw ConfigError(what);
    case Error::Kind::kDependency: throw DependencyError(what);
    case Error::Kind::kNumeric: throw NumericError(what);
  }
  throw Error(e.kind(), what);
}

}  // namespace

Stage parse_stage(const std::string& name) {
  if (name == "ingest") return Stage::kIngest;
  if (name == "sentiment") return Stage::kSentiment;
  if (name == "factors") return Stage::kFactors;
  if (name == "eventstudy") return Stage::kEventStudy;
  if (name == "timing") return Stage::kTiming;
  if (name == "regress") return Stage::kRegress;
  if (name == "all") return Stage::kAll;
  throw ConfigError("unknown stage '" + name + "'");
}

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::kIngest: return "ingest";
    case Stage::kSentiment: return "sentiment";
    case Stage::kFactors: return "factors";
    case Stage::kEventStudy: return "eventstudy";
    case Stage::kTiming: return "timing";
    case Stage::kRegress: return "regress";
    case Stage::kAll: return "all";
  }
  return "?";
}

Pipeline::Pipeline(RunConfig config) : config_(std::move(config)) {}

fs::path Pipeline::require(const std::string& file, Stage producer, Stage consumer) const {
  fs::path p = out(file);
  std::error_code ec;
  if (!fs::is_regular_file(p, ec))
    throw DependencyError(std::string("stage '") + stage_name(consumer) + "' needs " + file + " in '" +
                          config_.output_dir.string() + "'; run stage '" + stage_name(producer) + "' first");
  return p;
}

fs::path Pipeline::require_input(const std::string& key, Stage consumer) const {
  auto p = config_.input(key);
  if (!p)
    throw ConfigError(std::string("stage '") + stage_name(consumer) + "' needs input '" + key +
                      "' in the config");
  return *p;
}

const factormodel::SecurityPanel& Pipeline::panel() {
  if (!panel_) panel_ = std::make_unique<factormodel::SecurityPanel>(factormodel::load_panel(*config_.input("panel")));
  return *panel_;
}

std::vector<StageReport> Pipeline::run(Stage stage) {
  config_.validate();
  std::error_code ec;
  fs::create_directories(config_.output_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + config_.output_dir.string() + "': " + ec.message());

  std::vector<StageReport> reports;
  if (stage == Stage::kAll) {
    for (Stage s : kOrder) reports.push_back(run_one(s));
  } else {
    reports.push_back(run_one(stage));
  }
  write_manifest(reports);
  return reports;
}

StageReport Pipeline::run_one(Stage stage) {
  const auto started = std::chrono::steady_clock::now();
  StageReport report;
  try {
    switch (stage) {
      case Stage::kIngest: report = ingest(); break;
      case Stage::kSentiment: report = sentiment(); break;
      case Stage::kFactors: report = factors(); break;
      case Stage::kEventStudy: report = eventstudy(); break;
      case Stage::kTiming: report = timing(); break;
      case Stage::kRegress: report = regress(); break;
      case Stage::kAll: throw InvalidArgument("run_one(all)");
    }
  } catch (const Error& e) {
    const std::string prefix = std::string("stage '") + stage_name(stage) + "'";
    if (std::string_view(e.what()).starts_with(prefix)) throw;
    rethrow_with_context(e, prefix + ": ");
  }
  report.stage = stage_name(stage);
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

StageReport Pipeline::ingest() {
  StageReport r;
  auto records = corpus::load_transcripts(require_input("transcripts", Stage::kIngest));
  auto dict = corpus::load_firm_dictionary(require_input("firms", Stage::kIngest), config_.input("exclusions"));
  auto days = corpus::build_days(records);
  r.counts["records"] = records.size();
  r.counts["days"] = days.size();

  emit(r, config_.output_dir, "days.csv", [&](std::ostream& os) {
    CsvWriter w(os);
    w.header({"date", "source_count", "n_tokens", "tokens"});
    for (const auto& d : days) {
      std::string joined;
      for (const auto& t : d.tokens) joined += (joined.empty() ? "" : " ") + t;
      w.field(d.date.iso()).field(d.source_count).field(d.tokens.size()).field(joined);
      w.end_row();
    }
  });
  emit(r, config_.output_dir, "mentions.csv", [&](std::ostream& os) {
    CsvWriter w(os);
    w.header({"date", "firm_id", "count"});
    for (const auto& d : days)
      for (const auto& m : corpus::extract_mentions(d, dict, config_.min_mentions).mentions) {
        w.field(d.date.iso()).field(m.firm_id).field(m.count);
        w.end_row();
      }
  });
  return r;
}

StageReport Pipeline::sentiment() {
  StageReport r;
  auto days = read_days(require("days.csv", Stage::kIngest, Stage::kSentiment));
  auto mentions = read_mentions(require("mentions.csv", Stage::kIngest, Stage::kSentiment));
  auto lexicon = sentiment::load_lexicon(require_input("lexicon_positive", Stage::kSentiment),
                                         require_input("lexicon_negative", Stage::kSentiment));
  std::vector<sentiment::SentimentObservation> obs;
  for (const auto& d : days) obs.push_back(sentiment::score_day(d, lexicon));
  auto events = sentiment::build_stock_events(mentions, obs);

  std::size_t undefined = 0, positive = 0;
  for (const auto& o : obs)
    if (!o.score) ++undefined;
  for (const auto& e : events.events)
    if (e.polarity == sentiment::Polarity::kPositive) ++positive;
  r.counts["undefined_days"] = undefined;
  r.counts["events_positive"] = positive;
  r.counts["events_negative"] = events.events.size() - positive;
  r.exclusions = events.skipped.size();

  emit(r, config_.output_dir, "sentiment.csv", [&](std::ostream& os) { sentiment::write_sentiment_csv(os, obs); });
  emit(r, config_.output_dir, "events.csv",
       [&](std::ostream& os) { sentiment::write_events_csv(os, events.events); });
  emit(r, config_.output_dir, "skipped_mentions.csv", [&](std::ostream& os) {
    CsvWriter w(os);
    w.header({"firm_id", "date", "reason"});
    for (const auto& s : events.skipped) {
      w.field(s.firm_id).field(s.date.iso()).field(s.reason);
      w.end_row();
    }
  });
  return r;
}

StageReport Pipeline::factors() {
  StageReport r;
  factormodel::FactorSeries series;
  if (auto path = config_.input("factors")) {
    series = factormodel::load_factors(*path);
    r.counts["constructed"] = 0;
  } else {
    require_input("panel", Stage::kFactors);
    auto rf = factormodel::load_dated_series(require_input("risk_free", Stage::kFactors), "rf");
    auto built = factormodel::construct_factors(panel(), rf, config_.factor);
    series = std::move(built.series);
    r.counts["constructed"] = 1;
    r.counts["rebalances"] = built.rebalance_dates.size();
    r.counts["degenerate_spreads"] = built.degenerate_spreads;
    if (built.degenerate_spreads > 0)
      r.warnings.push_back(std::to_string(built.degenerate_spreads) + " long/short spreads had an empty leg");
  }
  emit(r, config_.output_dir, "factors.csv", [&](std::ostream& os) { factormodel::write_factors_csv(os, series); });

  factormodel::DatedSeries pz;
  if (auto path = config_.input("pct_zero")) {
    pz = factormodel::load_dated_series(*path, "pct_zero");
  } else if (config_.input("panel")) {
    const auto& p = panel();
    for (const auto& d : p.calendar().dates()) pz[d] = factormodel::compute_pct_zero(p, d);
  }
  if (!pz.empty())
    emit(r, config_.output_dir, "pct_zero.csv", [&](std::ostream& os) {
      CsvWriter w(os);
      w.header({"date", "pct_zero"});
      for (const auto& [d, v] : pz) {
        w.field(d.iso()).field(v);
        w.end_row();
      }
    });
  else
    r.warnings.push_back("no panel or pct_zero input; pct_zero.csv not written");
  return r;
}

StageReport Pipeline::eventstudy() {
  StageReport r;
  auto events = sentiment::read_events_csv(require("events.csv", Stage::kSentiment, Stage::kEventStudy));
  auto series = factormodel::load_factors(require("factors.csv", Stage::kFactors, Stage::kEventStudy));
  require_input("panel", Stage::kEventStudy);
  auto result = eventstudy::run_event_study(events, panel(), series, config_.event);

  r.exclusions = result.exclusions.size();
  r.counts["events_positive"] = result.positive.n_events;
  r.counts["events_negative"] = result.negative.n_events;
  r.counts["overlapping_events"] = result.overlapping_events;
  for (const auto* g : {&result.positive, &result.negative})
    if (g->empty()) r.warnings.push_back("group " + g->label + " has no surviving events");

  emit(r, config_.output_dir, "eventstudy.csv",
       [&](std::ostream& os) { eventstudy::write_event_study_csv(os, result); });
  emit(r, config_.output_dir, "exclusions.csv",
       [&](std::ostream& os) { eventstudy::write_exclusions_csv(os, result.exclusions); });
  return r;
}

StageReport Pipeline::timing() {
  StageReport r;
  auto obs = sentiment::read_sentiment_csv(require("sentiment.csv", Stage::kSentiment, Stage::kTiming));
  auto series = factormodel::load_factors(require("factors.csv", Stage::kFactors, Stage::kTiming));
  auto market = timing::market_excess_return(series);

  std::set<int> all_ns(config_.signal_ns.begin(), config_.signal_ns.end());
  all_ns.insert(config_.backtest_ns.begin(), config_.backtest_ns.end());
  std::vector<timing::SignalSeries> signals;
  for (int n : all_ns) {
    signals.push_back(timing::build_signal(obs, n, config_.window_mode));
    for (const auto& w : signals.back().warnings) r.warnings.push_back(w);
  }
  auto scan = timing::r2_scan(obs, config_.signal_ns, market, config_.lag, config_.window_mode);

  emit(r, config_.output_dir, "signal.csv", [&](std::ostream& os) { timing::write_signal_csv(os, signals); });
  emit(r, config_.output_dir, "r2_scan.csv", [&](std::ostream& os) { timing::write_r2_csv(os, scan); });

  std::vector<timing::BacktestResult> backtests;
  for (int n : config_.backtest_ns) {
    auto it = std::find_if(signals.begin(), signals.end(), [&](const auto& s) { return s.n == n; });
    try {
      backtests.push_back(timing::backtest_strategy(*it, market, config_.lag));
    } catch (const InvalidArgument& e) {
      r.warnings.push_back("backtest N=" + std::to_string(n) + ": " + e.what());
      continue;
    }
    emit(r, config_.output_dir, "backtest_N" + std::to_string(n) + ".csv",
         [&](std::ostream& os) { timing::write_backtest_csv(os, backtests.back()); });
  }
  emit(r, config_.output_dir, "backtest_summary.csv",
       [&](std::ostream& os) { timing::write_backtest_summary_csv(os, backtests); });
  return r;
}

StageReport Pipeline::regress() {
  StageReport r;
  auto obs = sentiment::read_sentiment_csv(require("sentiment.csv", Stage::kSentiment, Stage::kRegress));
  auto series = factormodel::load_factors(require("factors.csv", Stage::kFactors, Stage::kRegress));
  auto pz = factormodel::load_dated_series(require("pct_zero.csv", Stage::kFactors, Stage::kRegress), "pct_zero");
  auto nsi = factormodel::load_dated_series(require_input("nsi", Stage::kRegress), "nsi");
  auto rate = factormodel::load_dated_series(require_input("short_rate", Stage::kRegress), "short_rate");
  auto market = timing::market_excess_return(series);

  auto signal = timing::build_signal(obs, config_.regress_n, config_.window_mode);
  auto lagged = timing::lag_signal(timing::align_signal(signal, market.calendar), config_.lag);
  std::optional<std::size_t> first, last;
  for (std::size_t i = 0; i < lagged.size(); ++i)
    if (lagged[i]) {
      if (!first) first = i;
      last = i;
    }
  if (!first) throw InvalidArgument("regress: the lagged signal is never defined on the trading calendar");

  auto controls = factormodel::build_controls(market.calendar, nsi, rate, pz, market.calendar[*first],
                                              market.calendar[*last]);
  econometrics::TimingRegressionOptions opts;
  opts.lag = config_.lag;
  opts.tie_is_up = config_.tie_is_up;
  opts.with_ols = config_.ols;
  opts.se = config_.robust_se ? econometrics::StdErrors::kRobust : econometrics::StdErrors::kClassical;
  auto result = econometrics::run_timing_regressions(signal, controls, market, opts);
  r.counts["n_obs"] = result.n_obs;
  r.counts["dropped_rows"] = result.dropped_rows;
  for (std::size_t s = 0; s < result.logit.size(); ++s)
    if (!result.logit[s].converged) r.warnings.push_back(result.specs[s].name + " did not converge");

  emit(r, config_.output_dir, "controls.csv", [&](std::ostream& os) { factormodel::write_controls_csv(os, controls); });
  emit(r, config_.output_dir, "regression.csv",
       [&](std::ostream& os) { econometrics::write_regression_csv(os, result); });
  write_text_file(out("regression.txt"), econometrics::render_regression_table(result));
  return r;
}

void Pipeline::write_manifest(const std::vector<StageReport>& reports) {
  using json = nlohmann::ordered_json;
  const std::string canonical = config_.canonical();
  const std::string hash = hex64(fnv1a64(canonical));

  json stages = json::object();
  const fs::path path = out("manifest.json");
  std::error_code ec;
  if (fs::is_regular_file(path, ec)) {
    try {
      json previous = json::parse(read_text_file(path));
      if (previous.value("config_hash", "") == hash && previous.contains("stages")) stages = previous["stages"];
    } catch (const json::exception&) {
      // unreadable manifest: start over
    }
  }

  json m;
  m["tool"] = "infocontent";
  m["version"] = kVersion;
  m["config_hash"] = hash;
  json cfg = json::object();
  std::stringstream ss(canonical);
  std::string line;
  while (std::getline(ss, line)) {
    auto eq = line.find('=');
    cfg[line.substr(0, eq)] = line.substr(eq + 1);
  }
  m["config"] = cfg;
  json inputs = json::object();
  for (const auto& [key, p] : config_.inputs) {
    const std::string bytes = read_text_file(p);
    inputs[key] = {{"path", config_.raw_inputs.at(key)}, {"bytes", bytes.size()}, {"fnv1a64", hex64(fnv1a64(bytes))}};
  }
  m["inputs"] = inputs;

  for (const auto& r : reports) {
    json s;
    s["rows"] = r.rows;
    s["counts"] = r.counts;
    s["exclusions"] = r.exclusions;
    s["warnings"] = r.warnings;
    if (config_.manifest_timings) s["seconds"] = r.seconds;
    stages[r.stage] = s;
  }
  // Keep stage entries in pipeline order.
  json ordered = json::object();
  for (Stage st : kOrder)
    if (stages.contains(stage_name(st))) ordered[stage_name(st)] = stages[stage_name(st)];
  m["stages"] = ordered;
  write_text_file(path, m.dump(2) + "\n");
}

}  // namespace infocontent
