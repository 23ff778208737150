#pragma once

#include <vector>

#include <Eigen/Dense>

namespace infocontent::linalg {

struct LeastSquaresFit {
  Eigen::VectorXd beta;
  Eigen::VectorXd residuals;
  Eigen::MatrixXd xtx_inverse;  // (X'X)^-1 assembled from R, never by inverting X'X
  double ssr = 0.0;
};

// Column-pivoted Householder QR least squares. Throws NumericError naming the
// dependent column indices when X lacks full column rank.
LeastSquaresFit least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

// Indices of columns that the rank-revealing QR reports as dependent.
std::vector<Eigen::Index> dependent_columns(const Eigen::MatrixXd& x);

}  // namespace infocontent::linalg
