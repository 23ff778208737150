#include "infocontent/infocontent.h"

#include <memory>
#include <sstream>
#include <string>

#include "infocontent/config.hpp"
#include "infocontent/csv.hpp"
#include "infocontent/econometrics.hpp"
#include "infocontent/error.hpp"
#include "infocontent/pipeline.hpp"
#include "infocontent/sentiment.hpp"
#include "infocontent/synthetic.hpp"
#include "infocontent/timing.hpp"
#include "infocontent/version.hpp"

using namespace infocontent;

struct ic_pipeline {
  RunConfig config;
  std::string summary;
  std::string error;
};

struct ic_synth {
  synthetic::SynthConfig config;
  std::string error;
};

namespace {

ic_status status_of(Error::Kind k) {
  switch (k) {
    case Error::Kind::kInvalidArgument: return IC_INVALID_ARGUMENT;
    case Error::Kind::kIo: return IC_IO;
    case Error::Kind::kParse: return IC_PARSE;
    case Error::Kind::kConfig: return IC_CONFIG;
    case Error::Kind::kDependency: return IC_DEPENDENCY;
    case Error::Kind::kNumeric: return IC_NUMERIC;
  }
  return IC_INTERNAL;
}

// Runs fn, translating exceptions into a status and a message.
template <typename Fn>
ic_status guarded(std::string* error, Fn&& fn) {
  try {
    fn();
    if (error) error->clear();
    return IC_OK;
  } catch (const Error& e) {
    if (error) *error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    if (error) *error = "out of memory";
    return IC_INTERNAL;
  } catch (const std::exception& e) {
    if (error) *error = e.what();
    return IC_INTERNAL;
  }
}

double to_double(const std::string& key, const char* value) {
  auto v = parse_double(value);
  if (!v) throw InvalidArgument("synth: '" + key + "' expects a number, got '" + value + "'");
  return *v;
}

long long to_int(const std::string& key, const char* value) {
  auto v = parse_int(value);
  if (!v) throw InvalidArgument("synth: '" + key + "' expects an integer, got '" + value + "'");
  return *v;
}

std::size_t to_count(const std::string& key, const char* value) {
  auto v = to_int(key, value);
  if (v < 0) throw InvalidArgument("synth: '" + key + "' must be non-negative");
  return static_cast<std::size_t>(v);
}

void apply_synth(synthetic::SynthConfig& c, const std::string& key, const char* value) {
  if (key == "n_firms") c.n_firms = to_count(key, value);
  else if (key == "n_days") c.n_days = to_count(key, value);
  else if (key == "start") {
    auto d = Date::parse(value);
    if (!d) throw InvalidArgument("synth: 'start' expects YYYY-MM-DD");
    c.start = *d;
  } else if (key == "effect_bps") c.planted_event_effect_bps = to_double(key, value);
  else if (key == "effect_start") c.effect_start = static_cast<int>(to_int(key, value));
  else if (key == "effect_end") c.effect_end = static_cast<int>(to_int(key, value));
  else if (key == "n_event_days") c.n_event_days = to_count(key, value);
  else if (key == "firms_per_event_day") c.firms_per_event_day = to_count(key, value);
  else if (key == "signal_strength") c.planted_signal_strength = to_double(key, value);
  else if (key == "signal_intercept") c.signal_intercept = to_double(key, value);
  else if (key == "signal_n") c.signal_n = static_cast<int>(to_int(key, value));
  else if (key == "signal_lag") c.signal_lag = static_cast<int>(to_int(key, value));
  else if (key == "idio_vol") c.idio_vol = to_double(key, value);
  else if (key == "holiday_prob") c.holiday_prob = to_double(key, value);
  else if (key == "noise_free") {
    const std::string v = value;
    if (v == "true" || v == "1") c.noise_free = true;
    else if (v == "false" || v == "0") c.noise_free = false;
    else throw InvalidArgument("synth: 'noise_free' expects true or false");
  } else {
    throw InvalidArgument("synth: unknown setting '" + key + "'");
  }
}

std::string summarize(const std::vector<StageReport>& reports) {
  std::ostringstream os;
  for (const auto& r : reports) {
    os << r.stage << ":";
    for (const auto& [file, n] : r.rows) os << " " << file << "=" << n;
    if (r.exclusions) os << " exclusions=" << r.exclusions;
    os << "\n";
    for (const auto& w : r.warnings) os << "  warning: " << w << "\n";
  }
  return os.str();
}

}  // namespace

extern "C" {

const char* ic_status_string(ic_status status) {
  switch (status) {
    case IC_OK: return "ok";
    case IC_INVALID_ARGUMENT: return "invalid argument";
    case IC_IO: return "i/o error";
    case IC_PARSE: return "parse error";
    case IC_CONFIG: return "config error";
    case IC_DEPENDENCY: return "missing dependency";
    case IC_NUMERIC: return "numeric error";
    case IC_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* ic_version(void) { return kVersion; }

ic_status ic_pipeline_open(const char* config_path, ic_pipeline** out) {
  if (!out) return IC_INVALID_ARGUMENT;
  *out = nullptr;
  if (!config_path) return IC_INVALID_ARGUMENT;
  auto p = std::make_unique<ic_pipeline>();
  // Load errors have no handle to live on, so a handle is returned anyway
  // whenever allocation succeeded; the caller reads last_error and closes it.
  ic_status s = guarded(&p->error, [&] { p->config = RunConfig::load(config_path); });
  *out = p.release();
  return s;
}

ic_status ic_pipeline_set(ic_pipeline* p, const char* key, const char* value) {
  if (!p || !key || !value) return IC_INVALID_ARGUMENT;
  return guarded(&p->error, [&] { p->config.set(key, value); });
}

ic_status ic_pipeline_set_output(ic_pipeline* p, const char* dir) {
  if (!p || !dir) return IC_INVALID_ARGUMENT;
  return guarded(&p->error, [&] { p->config.output_dir = dir; });
}

ic_status ic_pipeline_run(ic_pipeline* p, const char* stage) {
  if (!p || !stage) return IC_INVALID_ARGUMENT;
  return guarded(&p->error, [&] {
    Pipeline pipeline(p->config);
    p->summary = summarize(pipeline.run(parse_stage(stage)));
  });
}

const char* ic_pipeline_summary(const ic_pipeline* p) { return p ? p->summary.c_str() : ""; }
const char* ic_pipeline_last_error(const ic_pipeline* p) { return p ? p->error.c_str() : "null handle"; }
void ic_pipeline_close(ic_pipeline* p) { delete p; }

ic_status ic_synth_create(ic_synth** out) {
  if (!out) return IC_INVALID_ARGUMENT;
  *out = new (std::nothrow) ic_synth();
  return *out ? IC_OK : IC_INTERNAL;
}

ic_status ic_synth_set(ic_synth* s, const char* key, const char* value) {
  if (!s || !key || !value) return IC_INVALID_ARGUMENT;
  return guarded(&s->error, [&] { apply_synth(s->config, key, value); });
}

ic_status ic_synth_write(ic_synth* s, uint64_t seed, const char* dir) {
  if (!s || !dir) return IC_INVALID_ARGUMENT;
  return guarded(&s->error, [&] {
    auto cfg = s->config;
    cfg.seed = seed;
    synthetic::write_dataset(synthetic::gen_dataset(cfg), dir);
  });
}

const char* ic_synth_last_error(const ic_synth* s) { return s ? s->error.c_str() : "null handle"; }
void ic_synth_destroy(ic_synth* s) { delete s; }

ic_status ic_sentiment_score(size_t n_positive, size_t n_negative, double* score) {
  if (!score) return IC_INVALID_ARGUMENT;
  auto v = sentiment::polarity_score(n_positive, n_negative);
  if (!v) return IC_NUMERIC;
  *score = *v;
  return IC_OK;
}

ic_status ic_build_signal(const double* values, size_t len, int n, int exclusive, int* out) {
  if ((!values || !out) && len > 0) return IC_INVALID_ARGUMENT;
  return guarded(nullptr, [&] {
    // Consecutive placeholder dates carry the series order.
    std::vector<sentiment::SentimentObservation> obs(len);
    const Date origin(2000, 1, 1);
    for (size_t i = 0; i < len; ++i) {
      obs[i].date = origin.plus_days(static_cast<int>(i));
      obs[i].score = values[i];
    }
    auto s = timing::build_signal(obs, n, exclusive ? timing::WindowMode::kExclusive : timing::WindowMode::kInclusive);
    for (size_t i = 0; i < len; ++i) out[i] = -1;
    for (size_t k = 0; k < s.dates.size(); ++k) out[s.dates[k].days_since(origin)] = s.values[k];
  });
}

ic_status ic_backtest(const int* positions, const double* market_returns, size_t len, double* strategy_equity,
                      double* benchmark_equity) {
  if (!positions || !market_returns || !strategy_equity || !benchmark_equity || len == 0) return IC_INVALID_ARGUMENT;
  return guarded(nullptr, [&] {
    std::vector<Date> dates;
    const Date origin(2000, 1, 1);
    std::vector<std::optional<int>> lagged(len);
    timing::MarketSeries market;
    for (size_t i = 0; i < len; ++i) {
      dates.push_back(origin.plus_days(static_cast<int>(i)));
      if (positions[i] == 0 || positions[i] == 1) lagged[i] = positions[i];
      else if (positions[i] != -1) throw InvalidArgument("backtest: positions must be 1, 0 or -1");
      market.values.push_back(market_returns[i]);
    }
    market.calendar = TradingCalendar(dates);
    auto r = timing::backtest_positions(lagged, market);
    const size_t skip = len - r.dates.size();
    for (size_t i = 0; i < len; ++i) {
      strategy_equity[i] = i < skip ? 0.0 : r.strategy_equity[i - skip];
      benchmark_equity[i] = i < skip ? 0.0 : r.benchmark_equity[i - skip];
    }
  });
}

ic_status ic_logit_fit(const double* x, const double* y, size_t n, size_t p, double* beta, double* std_err) {
  if (!x || !y || !beta || n == 0) return IC_INVALID_ARGUMENT;
  return guarded(nullptr, [&] {
    std::vector<std::string> names;
    std::vector<std::vector<std::optional<double>>> cols(p, std::vector<std::optional<double>>(n));
    std::vector<std::optional<double>> resp(n);
    for (size_t j = 0; j < p; ++j) names.push_back("x" + std::to_string(j + 1));
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < p; ++j) cols[j][i] = x[i * p + j];
      resp[i] = y[i];
    }
    auto fit = econometrics::fit_logit(econometrics::DesignMatrix::from_columns(names, cols, resp));
    if (!fit.converged) throw NumericError("logit: no convergence");
    for (size_t k = 0; k <= p; ++k) {
      beta[k] = fit.coefficients[k].estimate;
      if (std_err) std_err[k] = fit.coefficients[k].std_err;
    }
  });
}

}  // extern "C"
