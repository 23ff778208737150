#include "infocontent/linalg.hpp"

#include <algorithm>
#include <string>

#include "infocontent/error.hpp"

namespace infocontent::linalg {

namespace {

Eigen::ColPivHouseholderQR<Eigen::MatrixXd> decompose(const Eigen::MatrixXd& x) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  // Relative pivot threshold; correlated factor regressors sit well above it.
  qr.setThreshold(1e-10);
  return qr;
}

std::vector<Eigen::Index> dependent_from(const Eigen::ColPivHouseholderQR<Eigen::MatrixXd>& qr) {
  std::vector<Eigen::Index> cols;
  const auto& perm = qr.colsPermutation().indices();
  for (Eigen::Index k = qr.rank(); k < perm.size(); ++k) cols.push_back(perm(k));
  std::sort(cols.begin(), cols.end());
  return cols;
}

}  // namespace

std::vector<Eigen::Index> dependent_columns(const Eigen::MatrixXd& x) { return dependent_from(decompose(x)); }

LeastSquaresFit least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) throw InvalidArgument("least squares: row count mismatch");
  if (x.rows() < x.cols()) throw NumericError("least squares: fewer observations than columns");
  auto qr = decompose(x);
  if (qr.rank() < x.cols()) {
    std::string list;
    for (auto c : dependent_from(qr)) list += (list.empty() ? "" : ", ") + std::to_string(c);
    throw NumericError("least squares: design is rank deficient; dependent columns: " + list);
  }
  LeastSquaresFit fit;
  fit.beta = qr.solve(y);
  fit.residuals = y - x * fit.beta;
  fit.ssr = fit.residuals.squaredNorm();

  const Eigen::Index p = x.cols();
  Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  Eigen::MatrixXd inner = r_inv * r_inv.transpose();
  const auto& perm = qr.colsPermutation();
  fit.xtx_inverse = perm * inner * perm.transpose();
  return fit;
}

}  // namespace infocontent::linalg
