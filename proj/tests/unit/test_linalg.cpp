#include <doctest.h>

#include <random>

#include "../oracles.hpp"
#include "infocontent/error.hpp"
#include "infocontent/linalg.hpp"

using namespace infocontent;

TEST_CASE("least squares matches the normal-equations oracle") {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 20 + trial * 7, p = 1 + trial % 8;
    Eigen::MatrixXd x(n, p);
    Eigen::VectorXd y(n);
    testing::Matrix xm(n, std::vector<double>(p));
    std::vector<double> ym(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < p; ++j) xm[i][j] = x(i, j) = j == 0 ? 1.0 : z(gen);
      ym[i] = y(i) = z(gen);
    }
    auto fit = linalg::least_squares(x, y);
    auto ref = testing::normal_equations(xm, ym);
    for (int j = 0; j < p; ++j) CHECK(std::abs(fit.beta(j) - ref[j]) < 1e-10);
    CHECK(fit.ssr == doctest::Approx(fit.residuals.squaredNorm()));
    // (X'X)^-1 times X'X is the identity.
    Eigen::MatrixXd id = fit.xtx_inverse * (x.transpose() * x);
    CHECK((id - Eigen::MatrixXd::Identity(p, p)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("exact fit has zero residuals") {
  Eigen::MatrixXd x(4, 2);
  x << 1, 0, 1, 1, 1, 2, 1, 3;
  Eigen::VectorXd y(4);
  y << 1, 3, 5, 7;
  auto fit = linalg::least_squares(x, y);
  CHECK(fit.beta(0) == doctest::Approx(1.0));
  CHECK(fit.beta(1) == doctest::Approx(2.0));
  CHECK(fit.ssr < 1e-24);
}

TEST_CASE("rank deficiency names the dependent column") {
  Eigen::MatrixXd x(5, 3);
  x << 1, 1, 2, 1, 2, 4, 1, 3, 6, 1, 4, 8, 1, 5, 10;
  Eigen::VectorXd y = Eigen::VectorXd::Ones(5);
  CHECK(linalg::dependent_columns(x).size() == 1);
  CHECK_THROWS_AS(linalg::least_squares(x, y), NumericError);
  CHECK_THROWS_AS(linalg::least_squares(Eigen::MatrixXd::Ones(2, 3), Eigen::VectorXd::Ones(2)), NumericError);
}
