#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "infocontent/factormodel.hpp"
#include "infocontent/timing.hpp"

namespace infocontent::econometrics {

inline constexpr const char* kInterceptTerm = "(intercept)";

// Regressors and response with complete rows only.
struct DesignMatrix {
  std::vector<std::string> names;  // regressor names, intercept excluded
  Eigen::MatrixXd x;               // one column per name
  Eigen::VectorXd y;
  bool intercept = true;
  std::size_t dropped_rows = 0;

  // Builds from possibly-missing columns, dropping any row with a missing cell.
  // Throws InvalidArgument on duplicate names or ragged columns.
  static DesignMatrix from_columns(std::vector<std::string> names,
                                   const std::vector<std::vector<std::optional<double>>>& columns,
                                   const std::vector<std::optional<double>>& response, bool intercept = true);

  std::size_t rows() const { return static_cast<std::size_t>(y.size()); }
  Eigen::MatrixXd with_intercept() const;
  std::vector<std::string> terms() const;
};

enum class Model { kOls, kLogit };
enum class StdErrors { kClassical, kRobust };  // robust = White sandwich (HC0)

struct Coefficient {
  std::string term;
  double estimate = 0.0;
  double std_err = 0.0;
  double t_value = 0.0;
};

struct RegressionResult {
  Model model = Model::kOls;
  std::vector<Coefficient> coefficients;
  std::size_t n_obs = 0;
  // Logit only.
  std::size_t iterations = 0;
  bool converged = true;
  double log_likelihood = 0.0;
  double max_gradient = 0.0;

  const Coefficient& at(const std::string& term) const;
  Eigen::VectorXd estimates() const;
};

// Throws NumericError naming collinear columns, or when n <= parameters.
RegressionResult fit_ols(const DesignMatrix& design, StdErrors se = StdErrors::kClassical);

struct LogitOptions {
  double tolerance = 1e-10;  // max absolute coefficient change
  int max_iterations = 100;
  double separation_norm = 1e4;
  StdErrors se = StdErrors::kClassical;
};

// Maximum likelihood by iteratively reweighted least squares. Standard errors
// come from the inverse information matrix. Throws InvalidArgument for a
// non-binary or single-class response and NumericError on separation.
RegressionResult fit_logit(const DesignMatrix& design, const LogitOptions& options = {});

double logit_log_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta);
Eigen::VectorXd logit_gradient(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta);

struct TimingRegressionOptions {
  int lag = 2;
  bool tie_is_up = false;  // RMRF(t) == 0 counts as down unless set
  bool with_ols = false;   // also regress raw RMRF(t) by OLS
  StdErrors se = StdErrors::kClassical;
};

struct RegressionSpec {
  std::string name;
  std::vector<std::string> terms;
};

struct TimingRegressions {
  std::string signal_term;
  std::vector<std::string> all_terms;  // signal, dNSI, PctZero, Rf
  std::vector<RegressionSpec> specs;
  std::vector<RegressionResult> logit;
  std::vector<RegressionResult> ols;  // empty unless requested
  std::size_t n_obs = 0;
  std::size_t dropped_rows = 0;
};

// The five specifications: (1) S, (2) dNSI, (3) PctZero + Rf, (4) S + dNSI,
// (5) all four. Response is 1 when RMRF(t) > 0. All five use the common sample
// of trading dates on which every regressor is defined.
TimingRegressions run_timing_regressions(const timing::SignalSeries& signal,
                                         const factormodel::ControlSeries& controls,
                                         const timing::MarketSeries& market,
                                         const TimingRegressionOptions& options = {});

// `spec,term,estimate,std_err,t_value,n_obs`
void write_regression_csv(std::ostream& out, const TimingRegressions& r);
// Estimates with t-values in parentheses beneath, one column per regressor.
std::string render_regression_table(const TimingRegressions& r);

}  // namespace infocontent::econometrics
