#pragma once

// Hand-specified panels shared by the unit and acceptance tests.

#include <cmath>
#include <string>
#include <vector>

#include "factor_oracle.hpp"
#include "infocontent/factormodel.hpp"

namespace testing {

using infocontent::Date;
using infocontent::factormodel::DatedSeries;
using infocontent::factormodel::PanelRow;

// Twelve stocks (nine on the main exchange) observed on seven dates spanning
// two rebalances. Characteristic ranks are laid out against size ranks so that
// every 2x3 portfolio is populated at both rebalances.
inline OracleUniverse twelve_stock_universe() {
  const std::vector<Date> dates{Date(2021, 6, 30), Date(2021, 7, 1), Date(2021, 7, 2), Date(2021, 7, 5),
                                Date(2021, 12, 1), Date(2022, 7, 1), Date(2022, 7, 4)};
  // Indexed by size rank among main stocks; 0-4 small, 5-8 big.
  const int bm_rank[9] = {0, 3, 6, 1, 4, 7, 2, 5, 8};
  const int op_rank[9] = {6, 0, 4, 2, 7, 1, 8, 3, 5};
  const int inv_rank[9] = {2, 5, 8, 0, 3, 4, 6, 1, 7};
  OracleUniverse u;
  for (int f = 0; f < 12; ++f) {
    const std::string id = (f < 9 ? "S" : "T") + std::to_string(10 + f);
    for (std::size_t d = 0; d < dates.size(); ++d) {
      if (f == 4 && d == 3) continue;  // missing row mid-period
      const bool second = d >= 5;
      OracleRow r;
      r.ret = 0.001 * ((f * 7 + static_cast<int>(d) * 5) % 11 - 5);
      r.main = f < 9;
      r.ta_prior = 1000.0;
      if (r.main) {
        const int c = second ? (f * 4) % 9 : f;
        r.cap = 100.0 + 10.0 * c + (d == 1 || d == 5 ? 0.0 : 0.5 * static_cast<double>(d));
        r.be = r.cap * (0.5 + 0.1 * bm_rank[c]);
        r.oi = r.be * (0.05 + 0.01 * op_rank[c]);
        r.ta = r.ta_prior * (1.0 + 0.02 * inv_rank[c]);
      } else {
        r.cap = 95.0 + 30.0 * (f - 9) + static_cast<double>(d);
        r.be = f == 9 ? -5.0 : 0.7 * r.cap;
        r.oi = 0.08 * std::abs(r.be);
        r.ta = 1060.0;
        if (f == 10) r.ta_prior = 0.0;
      }
      u[id][dates[d]] = r;
    }
  }
  return u;
}

inline std::vector<PanelRow> to_rows(const OracleUniverse& u) {
  std::vector<PanelRow> rows;
  for (const auto& [firm, m] : u)
    for (const auto& [d, r] : m)
      rows.push_back({firm, d, r.ret, r.cap, r.main ? "main" : "other", r.be, r.oi, r.ta, r.ta_prior});
  return rows;
}

inline DatedSeries rf_for(const std::vector<PanelRow>& rows, double v) {
  DatedSeries rf;
  for (const auto& r : rows) rf[r.date] = v;
  return rf;
}


// n stocks with identical returns, caps and fundamentals on `days` dates from 2021-07-01.
inline std::vector<PanelRow> identical_stocks(int n = 12, int days = 5) {
  std::vector<PanelRow> rows;
  for (int f = 0; f < n; ++f)
    for (int d = 0; d < days; ++d)
      rows.push_back({"F" + std::to_string(f), Date(2021, 7, 1).plus_days(d), 0.01 * (d - 2), 50.0, "main", 10.0, 2.0,
                      110.0, 100.0});
  return rows;
}

}  // namespace testing
