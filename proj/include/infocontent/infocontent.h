/* C interface to the infocontent toolkit. All strings are UTF-8. Functions
 * return an ic_status; on failure the handle's last_error holds the message. */
#ifndef INFOCONTENT_H
#define INFOCONTENT_H

#include <stddef.h>
#include <stdint.h>

#if defined(INFOCONTENT_BUILDING_LIBRARY)
#define IC_API __attribute__((visibility("default")))
#else
#define IC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ic_status {
  IC_OK = 0,
  IC_INVALID_ARGUMENT = 1,
  IC_IO = 2,
  IC_PARSE = 3,
  IC_CONFIG = 4,
  IC_DEPENDENCY = 5,
  IC_NUMERIC = 6,
  IC_INTERNAL = 7
} ic_status;

IC_API const char* ic_status_string(ic_status status);
IC_API const char* ic_version(void);

/* Pipeline over one config file and output directory. */
typedef struct ic_pipeline ic_pipeline;

IC_API ic_status ic_pipeline_open(const char* config_path, ic_pipeline** out);
/* Overrides one config key, e.g. ("lag", "3"). */
IC_API ic_status ic_pipeline_set(ic_pipeline* p, const char* key, const char* value);
IC_API ic_status ic_pipeline_set_output(ic_pipeline* p, const char* dir);
/* stage: ingest, sentiment, factors, eventstudy, timing, regress or all. */
IC_API ic_status ic_pipeline_run(ic_pipeline* p, const char* stage);
/* Human-readable per-stage summary of the last successful run. */
IC_API const char* ic_pipeline_summary(const ic_pipeline* p);
IC_API const char* ic_pipeline_last_error(const ic_pipeline* p);
IC_API void ic_pipeline_close(ic_pipeline* p);

/* Synthetic dataset generator. */
typedef struct ic_synth ic_synth;

IC_API ic_status ic_synth_create(ic_synth** out);
/* Keys: n_firms, n_days, start, effect_bps, effect_start, effect_end,
 * n_event_days, firms_per_event_day, signal_strength, signal_intercept,
 * signal_n, signal_lag, idio_vol, noise_free, holiday_prob. */
IC_API ic_status ic_synth_set(ic_synth* s, const char* key, const char* value);
IC_API ic_status ic_synth_write(ic_synth* s, uint64_t seed, const char* dir);
IC_API const char* ic_synth_last_error(const ic_synth* s);
IC_API void ic_synth_destroy(ic_synth* s);

/* Stateless helpers. Errors are reported through the returned status only. */

/* Writes (pos - neg) / (pos + neg); IC_NUMERIC when both counts are zero. */
IC_API ic_status ic_sentiment_score(size_t n_positive, size_t n_negative, double* score);

/* values[0..len) is a date-ordered score series. out[k] receives 1 or 0 for
 * k >= n and -1 before. exclusive != 0 leaves x_k out of the trailing mean. */
IC_API ic_status ic_build_signal(const double* values, size_t len, int n, int exclusive, int* out);

/* Long the market when positions[i] == 1, short when 0, flat when -1.
 * Fills compounded cumulative returns of the strategy and of buy-and-hold
 * (len entries each); entries before the first defined position are 0. */
IC_API ic_status ic_backtest(const int* positions, const double* market_returns, size_t len,
                             double* strategy_equity, double* benchmark_equity);

/* Logit of y on an intercept plus p columns of x (row-major, n x p).
 * beta and std_err have p + 1 entries, intercept first. */
IC_API ic_status ic_logit_fit(const double* x, const double* y, size_t n, size_t p, double* beta,
                              double* std_err);

#ifdef __cplusplus
}
#endif

#endif
