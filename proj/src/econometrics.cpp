#include "infocontent/econometrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "infocontent/csv.hpp"
#include "infocontent/error.hpp"
#include "infocontent/linalg.hpp"

namespace infocontent::econometrics {

DesignMatrix DesignMatrix::from_columns(std::vector<std::string> names,
                                        const std::vector<std::vector<std::optional<double>>>& columns,
                                        const std::vector<std::optional<double>>& response, bool intercept) {
  if (names.size() != columns.size()) throw InvalidArgument("design: one name per column required");
  std::set<std::string> seen;
  for (const auto& n : names)
    if (n == kInterceptTerm || !seen.insert(n).second) throw InvalidArgument("design: duplicate column '" + n + "'");
  for (const auto& c : columns)
    if (c.size() != response.size()) throw InvalidArgument("design: column length differs from response");

  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < response.size(); ++r) {
    bool complete = response[r].has_value();
    for (const auto& c : columns) complete = complete && c[r].has_value();
    if (complete) keep.push_back(r);
  }
  DesignMatrix d;
  d.names = std::move(names);
  d.intercept = intercept;
  d.dropped_rows = response.size() - keep.size();
  const auto n = static_cast<Eigen::Index>(keep.size());
  d.x.resize(n, static_cast<Eigen::Index>(columns.size()));
  d.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d.y(i) = *response[keep[i]];
    for (std::size_t j = 0; j < columns.size(); ++j) d.x(i, static_cast<Eigen::Index>(j)) = *columns[j][keep[i]];
  }
  return d;
}

Eigen::MatrixXd DesignMatrix::with_intercept() const {
  if (!intercept) return x;
  Eigen::MatrixXd full(x.rows(), x.cols() + 1);
  full.col(0).setOnes();
  full.rightCols(x.cols()) = x;
  return full;
}

std::vector<std::string> DesignMatrix::terms() const {
  std::vector<std::string> t;
  if (intercept) t.push_back(kInterceptTerm);
  t.insert(t.end(), names.begin(), names.end());
  return t;
}

const Coefficient& RegressionResult::at(const std::string& term) const {
  for (const auto& c : coefficients)
    if (c.term == term) return c;
  throw InvalidArgument("no coefficient named '" + term + "'");
}

Eigen::VectorXd RegressionResult::estimates() const {
  Eigen::VectorXd b(static_cast<Eigen::Index>(coefficients.size()));
  for (std::size_t i = 0; i < coefficients.size(); ++i) b(static_cast<Eigen::Index>(i)) = coefficients[i].estimate;
  return b;
}

namespace {

void check_rank(const Eigen::MatrixXd& x, const std::vector<std::string>& terms) {
  auto dep = linalg::dependent_columns(x);
  if (dep.empty()) return;
  // Name each dependent column together with the columns that reproduce it.
  std::vector<Eigen::Index> indep;
  for (Eigen::Index c = 0; c < x.cols(); ++c)
    if (std::find(dep.begin(), dep.end(), c) == dep.end()) indep.push_back(c);
  Eigen::MatrixXd basis(x.rows(), static_cast<Eigen::Index>(indep.size()));
  for (std::size_t k = 0; k < indep.size(); ++k) basis.col(static_cast<Eigen::Index>(k)) = x.col(indep[k]);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
  std::set<Eigen::Index> involved(dep.begin(), dep.end());
  for (auto d : dep) {
    const Eigen::VectorXd coef = qr.solve(x.col(d));
    const double scale = std::max(1.0, coef.cwiseAbs().maxCoeff());
    for (Eigen::Index k = 0; k < coef.size(); ++k)
      if (std::abs(coef(k)) > 1e-8 * scale) involved.insert(indep[static_cast<std::size_t>(k)]);
  }
  std::string list;
  for (auto c : involved) list += (list.empty() ? "" : ", ") + terms[static_cast<std::size_t>(c)];
  throw NumericError("design is rank deficient; collinear columns: " + list);
}

Eigen::MatrixXd sandwich(const Eigen::MatrixXd& bread, const Eigen::MatrixXd& x, const Eigen::VectorXd& scores) {
  Eigen::MatrixXd meat = x.transpose() * scores.array().square().matrix().asDiagonal() * x;
  return bread * meat * bread;
}

std::vector<Coefficient> coefficients_from(const std::vector<std::string>& terms, const Eigen::VectorXd& beta,
                                           const Eigen::MatrixXd& cov) {
  std::vector<Coefficient> out;
  for (std::size_t j = 0; j < terms.size(); ++j) {
    const auto k = static_cast<Eigen::Index>(j);
    Coefficient c{terms[j], beta(k), std::sqrt(cov(k, k)), 0.0};
    c.t_value = c.estimate / c.std_err;
    out.push_back(c);
  }
  return out;
}

double sigmoid(double eta) {
  if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

// log(1 + exp(eta)) without overflow.
double softplus(double eta) { return std::max(eta, 0.0) + std::log1p(std::exp(-std::abs(eta))); }

}  // namespace

RegressionResult fit_ols(const DesignMatrix& design, StdErrors se) {
  const Eigen::MatrixXd x = design.with_intercept();
  const auto terms = design.terms();
  const auto n = x.rows(), p = x.cols();
  if (n <= p)
    throw NumericError("ols: " + std::to_string(n) + " observations for " + std::to_string(p) + " coefficients");
  check_rank(x, terms);
  auto fit = linalg::least_squares(x, design.y);

  Eigen::MatrixXd cov;
  if (se == StdErrors::kRobust)
    cov = sandwich(fit.xtx_inverse, x, fit.residuals);
  else
    cov = fit.xtx_inverse * (fit.ssr / static_cast<double>(n - p));

  RegressionResult r;
  r.model = Model::kOls;
  r.n_obs = static_cast<std::size_t>(n);
  r.coefficients = coefficients_from(terms, fit.beta, cov);
  return r;
}

double logit_log_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = x * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) ll += y(i) * eta(i) - softplus(eta(i));
  return ll;
}

Eigen::VectorXd logit_gradient(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = x * beta;
  Eigen::VectorXd resid(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) resid(i) = y(i) - sigmoid(eta(i));
  return x.transpose() * resid;
}

RegressionResult fit_logit(const DesignMatrix& design, const LogitOptions& options) {
  const Eigen::MatrixXd x = design.with_intercept();
  const Eigen::VectorXd& y = design.y;
  const auto terms = design.terms();
  const auto n = x.rows(), p = x.cols();

  std::size_t ones = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (y(i) != 0.0 && y(i) != 1.0) throw InvalidArgument("logit: response must be 0 or 1");
    if (y(i) == 1.0) ++ones;
  }
  if (ones == 0 || ones == static_cast<std::size_t>(n))
    throw InvalidArgument("logit: response has a single class");
  if (n <= p) throw NumericError("logit: too few observations");
  check_rank(x, terms);

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double ll = logit_log_likelihood(x, y, beta);
  RegressionResult r;
  r.model = Model::kLogit;
  r.converged = false;

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    r.iterations = static_cast<std::size_t>(iter);
    // Newton step from the weighted least-squares problem
    //   min || sqrt(W) X d - (y - p) / sqrt(W) ||.
    const Eigen::VectorXd eta = x * beta;
    Eigen::VectorXd sw(n), rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mu = sigmoid(eta(i));
      const double w = std::max(mu * (1.0 - mu), 1e-300);
      sw(i) = std::sqrt(w);
      rhs(i) = (y(i) - mu) / sw(i);
    }
    Eigen::MatrixXd xw = sw.asDiagonal() * x;
    Eigen::VectorXd step;
    try {
      step = linalg::least_squares(xw, rhs).beta;
    } catch (const NumericError&) {
      throw NumericError("logit: separation detected (information matrix became singular)");
    }

    Eigen::VectorXd candidate = beta + step;
    double ll_new = logit_log_likelihood(x, y, candidate);
    for (int halving = 0; halving < 40 && ll_new < ll - 1e-12 * std::abs(ll); ++halving) {
      step *= 0.5;
      candidate = beta + step;
      ll_new = logit_log_likelihood(x, y, candidate);
    }
    beta = candidate;
    ll = ll_new;
    if (beta.norm() > options.separation_norm)
      throw NumericError("logit: separation detected (coefficient norm exceeded " +
                         format_double(options.separation_norm) + ")");
    if (step.cwiseAbs().maxCoeff() < options.tolerance) {
      r.converged = true;
      break;
    }
  }

  // Information matrix X'WX at the estimate.
  const Eigen::VectorXd eta = x * beta;
  Eigen::VectorXd sw(n), score(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mu = sigmoid(eta(i));
    sw(i) = std::sqrt(mu * (1.0 - mu));
    score(i) = y(i) - mu;
  }
  Eigen::MatrixXd xw = sw.asDiagonal() * x;
  Eigen::MatrixXd info_inv;
  try {
    info_inv = linalg::least_squares(xw, Eigen::VectorXd::Zero(n)).xtx_inverse;
  } catch (const NumericError&) {
    throw NumericError("logit: separation detected (singular information at the estimate)");
  }
  Eigen::MatrixXd cov = options.se == StdErrors::kRobust ? sandwich(info_inv, x, score) : info_inv;

  r.n_obs = static_cast<std::size_t>(n);
  r.log_likelihood = ll;
  r.max_gradient = (x.transpose() * score).cwiseAbs().maxCoeff();
  r.coefficients = coefficients_from(terms, beta, cov);
  return r;
}

// ---------------------------------------------------------------------------
// Five-specification timing regressions

TimingRegressions run_timing_regressions(const timing::SignalSeries& signal,
                                         const factormodel::ControlSeries& controls,
                                         const timing::MarketSeries& market,
                                         const TimingRegressionOptions& options) {
  TimingRegressions out;
  out.signal_term = "S(" + std::to_string(signal.n) + ",t-" + std::to_string(options.lag) + ")";
  const std::string dnsi = "dNSI(t)", pz = "PctZero(t)", rf = "Rf(t)";
  out.all_terms = {out.signal_term, dnsi, pz, rf};
  out.specs = {{"logit1", {out.signal_term}},
               {"logit2", {dnsi}},
               {"logit3", {pz, rf}},
               {"logit4", {out.signal_term, dnsi}},
               {"logit5", {out.signal_term, dnsi, pz, rf}}};

  const auto lagged = timing::lag_signal(timing::align_signal(signal, market.calendar), options.lag);
  std::vector<std::vector<std::optional<double>>> cols(4);
  std::vector<std::optional<double>> up, raw;
  for (std::size_t i = 0; i < market.calendar.size(); ++i) {
    const auto c = controls.index_of(market.calendar[i]);
    const factormodel::ControlDay none{};
    const auto& day = c ? controls.days[*c] : none;
    std::array<std::optional<double>, 4> row{
        lagged[i] ? std::optional<double>(*lagged[i]) : std::nullopt, day.d_nsi, day.pct_zero, day.short_rate};
    // Common sample: every regressor present.
    if (std::any_of(row.begin(), row.end(), [](const auto& v) { return !v; })) {
      ++out.dropped_rows;
      continue;
    }
    for (std::size_t k = 0; k < 4; ++k) cols[k].push_back(row[k]);
    const double m = market.values[i];
    up.push_back(m > 0.0 || (options.tie_is_up && m == 0.0) ? 1.0 : 0.0);
    raw.push_back(m);
  }
  out.n_obs = up.size();
  if (out.n_obs == 0) throw InvalidArgument("timing regressions: no trading date has every regressor defined");

  for (const auto& spec : out.specs) {
    std::vector<std::vector<std::optional<double>>> spec_cols;
    for (const auto& term : spec.terms) {
      auto it = std::find(out.all_terms.begin(), out.all_terms.end(), term);
      spec_cols.push_back(cols[static_cast<std::size_t>(it - out.all_terms.begin())]);
    }
    try {
      LogitOptions lo;
      lo.se = options.se;
      out.logit.push_back(fit_logit(DesignMatrix::from_columns(spec.terms, spec_cols, up), lo));
      if (options.with_ols)
        out.ols.push_back(fit_ols(DesignMatrix::from_columns(spec.terms, spec_cols, raw), options.se));
    } catch (const NumericError& e) {
      throw NumericError("regression " + spec.name + ": " + e.what());
    }
  }
  return out;
}

void write_regression_csv(std::ostream& out, const TimingRegressions& r) {
  CsvWriter w(out);
  w.header({"spec", "term", "estimate", "std_err", "t_value", "n_obs"});
  auto emit = [&](const std::string& prefix, const std::vector<RegressionResult>& results) {
    for (std::size_t s = 0; s < results.size(); ++s)
      for (const auto& c : results[s].coefficients) {
        w.field(prefix + std::to_string(s + 1)).field(c.term).field(c.estimate).field(c.std_err);
        w.field(c.t_value).field(results[s].n_obs);
        w.end_row();
      }
  };
  emit("logit", r.logit);
  emit("ols", r.ols);
}

namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  // Display width counts code points, not bytes.
  std::size_t cps = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++cps;
  return cps >= width ? s : std::string(width - cps, ' ') + s;
}

std::string display_term(const std::string& term) {
  if (term == "dNSI(t)") return "ΔNSI(t)";
  if (term == "Rf(t)") return "R_f(t)";
  if (term.starts_with("S(")) {
    std::string s = term;
    auto comma = s.find(',');
    if (comma != std::string::npos) s.insert(comma + 1, " ");
    return s;
  }
  return term;
}

void render_block(std::ostringstream& os, const std::string& title, const TimingRegressions& r,
                  const std::vector<RegressionResult>& results) {
  constexpr std::size_t label_w = 20, col_w = 13;
  os << pad("", label_w);
  for (const auto& t : r.all_terms) os << pad(display_term(t), col_w);
  os << pad("n_obs", 8) << '\n';
  os << std::string(label_w + col_w * r.all_terms.size() + 8, '-') << '\n';
  for (std::size_t s = 0; s < results.size(); ++s) {
    std::string est_line = title + " Regression" + std::to_string(s + 1);
    est_line += std::string(label_w > est_line.size() ? label_w - est_line.size() : 1, ' ');
    std::string t_line(label_w, ' ');
    for (const auto& term : r.all_terms) {
      const auto& spec_terms = r.specs[s].terms;
      if (std::find(spec_terms.begin(), spec_terms.end(), term) == spec_terms.end()) {
        est_line += pad("", col_w);
        t_line += pad("", col_w);
        continue;
      }
      const auto& c = results[s].at(term);
      est_line += pad(fixed(c.estimate), col_w);
      t_line += pad("(" + fixed(c.t_value) + ")", col_w);
    }
    est_line += pad(std::to_string(results[s].n_obs), 8);
    os << est_line << '\n' << t_line << '\n';
  }
  os << std::string(label_w + col_w * r.all_terms.size() + 8, '-') << '\n';
}

}  // namespace

std::string render_regression_table(const TimingRegressions& r) {
  std::ostringstream os;
  render_block(os, "Logit", r, r.logit);
  os << "Slopes with t-values in parentheses; up(1)/down(0) response on RMRF(t).\n";
  if (!r.ols.empty()) {
    os << '\n';
    render_block(os, "OLS", r, r.ols);
    os << "OLS of RMRF(t) on the same regressors.\n";
  }
  return os.str();
}

}  // namespace infocontent::econometrics
