#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "infocontent/date.hpp"
#include "infocontent/error.hpp"
#include "infocontent/factormodel.hpp"
#include "infocontent/sentiment.hpp"

namespace infocontent::eventstudy {

// Relative days count trading days; day 0 is the aligned announcement date.
struct EventWindowConfig {
  int est_start = -273;
  int est_end = -21;
  int evt_start = -20;  // t0
  int evt_len = 40;     // T; the window is [t0, t0 + T]
  std::size_t min_est_obs = 120;

  // Throws InvalidArgument unless est_start < est_end < evt_start, evt_len >= 0
  // and min_est_obs fits in the estimation window.
  void validate() const;
  int evt_end() const { return evt_start + evt_len; }
};

inline constexpr std::size_t kRegressors = 15;  // 5 factors x {lag, same day, lead}

// Slope layout: index 3*f + k with f over rmrf, smb, hml, rmw, cma and k = 0
// for F(t-1), 1 for F(t), 2 for F(t+1).
constexpr std::size_t slope_index(std::size_t factor, int shift) {
  return 3 * factor + static_cast<std::size_t>(shift + 1);
}

struct ExposureEstimate {
  std::string firm_id;
  double alpha = 0.0;
  std::array<double, kRegressors> slopes{};
  std::size_t n_obs = 0;
  double residual_variance = 0.0;
};

// Stock return minus rf on each date of the factor calendar; nullopt where the
// panel has no row.
using ExcessReturns = std::vector<std::optional<double>>;

ExcessReturns excess_returns(const factormodel::SecurityPanel& panel, std::size_t firm,
                             const factormodel::FactorSeries& factors);

// Lead/lag regressor row for calendar index i, nullopt at the series ends.
std::optional<std::array<double, kRegressors>> regressors_at(const factormodel::FactorSeries& factors,
                                                             std::size_t i);

// Trading date on or after the announcement. Throws InvalidArgument when the
// calendar ends before it.
std::size_t align_event_date(const Date& announce, const TradingCalendar& calendar);

// Thrown when an event cannot be estimated for data reasons.
class InsufficientData : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// OLS of excess return on intercept plus the 15 lead/lag regressors over the
// estimation window around calendar index `event_idx`.
// Throws InsufficientData if fewer than min_est_obs usable days and
// NumericError if the design is rank deficient.
ExposureEstimate estimate_exposures(std::span<const std::optional<double>> excess,
                                    const factormodel::FactorSeries& factors, const EventWindowConfig& window,
                                    std::size_t event_idx);

// Abnormal returns for relative days [t0, t0 + T]. Days without a return or
// regressors stay nullopt.
struct ArPath {
  int start = 0;
  std::vector<std::optional<double>> ar;

  std::optional<double> at(int rel_day) const;
  int end() const { return start + static_cast<int>(ar.size()) - 1; }
};

ArPath compute_ar(const ExposureEstimate& estimate, std::span<const std::optional<double>> excess,
                  const factormodel::FactorSeries& factors, const EventWindowConfig& window,
                  std::size_t event_idx);

// Sub-range [from, to] of a path, missing outside it.
ArPath slice(const ArPath& path, int from, int to);

struct PooledResult {
  int t0 = 0;
  std::vector<std::optional<double>> aar;  // relative days t0..t0+T
  std::vector<double> caar;                // running sum of the defined AAR values
  std::vector<std::size_t> n_events;       // observations behind each AAR
  std::size_t n_paths = 0;

  int relative_day(std::size_t k) const { return t0 + static_cast<int>(k); }
};

// AAR is the mean over paths with data on that day; CAAR is the running sum
// from t0. Throws InvalidArgument on an empty pool.
PooledResult pool_aar_caar(const std::vector<ArPath>& paths, int t0, int evt_len);

struct Exclusion {
  std::string firm_id;
  Date announce_date;
  std::string reason;
};

struct GroupResult {
  std::string label;  // J+ or J-
  std::size_t n_events = 0;
  std::vector<ExposureEstimate> estimates;
  std::vector<ArPath> paths;
  std::optional<PooledResult> full;  // [t0, t0 + T]
  std::optional<PooledResult> sub;   // [sub_start, sub_start + sub_len]

  bool empty() const { return n_events == 0; }
};

struct EventStudyConfig {
  EventWindowConfig window;
  int sub_start = 0;
  int sub_len = 20;
};

struct EventStudyOutput {
  GroupResult positive;
  GroupResult negative;
  std::vector<Exclusion> exclusions;
  // Events whose window overlaps an earlier event of the same firm.
  std::size_t overlapping_events = 0;
};

// Partitions by polarity, aligns, estimates, computes AR and pools both the
// full and the sub window. Events that cannot be processed are excluded with
// a reason instead of failing the run.
EventStudyOutput run_event_study(std::vector<sentiment::StockSentimentEvent> events,
                                 const factormodel::SecurityPanel& panel,
                                 const factormodel::FactorSeries& factors, const EventStudyConfig& config);

// `group,relative_day,aar,caar,n_events`; the group column names the polarity
// and window, e.g. `J+[-20,20]`.
void write_event_study_csv(std::ostream& out, const EventStudyOutput& result);
// `firm_id,announce_date,reason`
void write_exclusions_csv(std::ostream& out, const std::vector<Exclusion>& exclusions);

std::string window_label(const std::string& group, int from, int to);

}  // namespace infocontent::eventstudy
