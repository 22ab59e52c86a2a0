#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "planemhd/tridiag.hpp"

using namespace planemhd;

TEST(Tridiag, IdentityReturnsRhs) {
  TridiagonalSystem s(6);
  for (std::size_t k = 0; k < 6; ++k) {
    s.diag[k] = 1.0;
    s.rhs[k] = static_cast<double>(k) - 2.5;
  }
  EXPECT_EQ(tridiag_solve(s), s.rhs);
}

TEST(Tridiag, MatchesDenseSolveOnRandomDiagonallyDominantSystems) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 8;
    TridiagonalSystem s(n);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd b(n);
    for (int k = 0; k < n; ++k) {
      s.lower[k] = k > 0 ? d(rng) : 0.0;
      s.upper[k] = k + 1 < n ? d(rng) : 0.0;
      s.diag[k] = (std::abs(s.lower[k]) + std::abs(s.upper[k]) + 0.1 + std::abs(d(rng))) * (d(rng) < 0 ? -1 : 1);
      s.rhs[k] = d(rng);
      a(k, k) = s.diag[k];
      if (k > 0) a(k, k - 1) = s.lower[k];
      if (k + 1 < n) a(k, k + 1) = s.upper[k];
      b(k) = s.rhs[k];
    }
    const Eigen::VectorXd ref = a.fullPivLu().solve(b);
    const auto x = tridiag_solve(s);
    for (int k = 0; k < n; ++k) EXPECT_NEAR(x[k], ref(k), 1e-12);
    EXPECT_LE(tridiag_residual_inf(s, x), 1e-12);
  }
}

TEST(Tridiag, LaplacianEigenvector) {
  // -u'' with Dirichlet walls on n interior points: eigenvectors sin(k pi j / (n+1)),
  // eigenvalues 2 - 2 cos(k pi / (n+1)).
  const int n = 31;
  const double shift = 0.3;
  for (int mode = 1; mode <= 5; ++mode) {
    TridiagonalSystem s(n);
    const double lam = 2.0 - 2.0 * std::cos(mode * std::numbers::pi / (n + 1));
    std::vector<double> v(n);
    for (int j = 0; j < n; ++j) {
      v[j] = std::sin(mode * std::numbers::pi * (j + 1) / (n + 1));
      s.diag[j] = 2.0 + shift;
      s.lower[j] = j > 0 ? -1.0 : 0.0;
      s.upper[j] = j + 1 < n ? -1.0 : 0.0;
      s.rhs[j] = v[j];
    }
    const auto x = tridiag_solve(s);
    for (int j = 0; j < n; ++j) EXPECT_NEAR(x[j], v[j] / (lam + shift), 1e-12);
  }
}

TEST(Tridiag, RejectsSizeMismatchAndZeroPivot) {
  std::vector<double> a(3, 0.0), b(3, 1.0), c(2, 0.0), r(3, 1.0);
  EXPECT_THROW(tridiag_solve(a, b, c, r), std::invalid_argument);
  TridiagonalSystem s(2);
  s.rhs = {1.0, 1.0};
  EXPECT_THROW(tridiag_solve(s), std::runtime_error);
}

TEST(Tridiag, EmptySystem) {
  TridiagonalSystem s(0);
  EXPECT_TRUE(tridiag_solve(s).empty());
}
