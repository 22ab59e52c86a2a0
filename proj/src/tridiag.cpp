#include "planemhd/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace planemhd {

std::vector<double> tridiag_solve(std::span<const double> lower, std::span<const double> diag,
                                  std::span<const double> upper, std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n) {
    throw std::invalid_argument("tridiag_solve: band and rhs sizes differ");
  }
  std::vector<double> c(n, 0.0);
  std::vector<double> x(n, 0.0);
  if (n == 0) return x;

  double pivot = diag[0];
  if (pivot == 0.0) throw std::runtime_error("tridiag_solve: zero pivot in row 0");
  c[0] = upper[0] / pivot;
  x[0] = rhs[0] / pivot;
  for (std::size_t k = 1; k < n; ++k) {
    pivot = diag[k] - lower[k] * c[k - 1];
    if (pivot == 0.0) throw std::runtime_error("tridiag_solve: zero pivot in row " + std::to_string(k));
    c[k] = upper[k] / pivot;
    x[k] = (rhs[k] - lower[k] * x[k - 1]) / pivot;
  }
  for (std::size_t k = n - 1; k-- > 0;) x[k] -= c[k] * x[k + 1];
  return x;
}

double tridiag_residual_inf(const TridiagonalSystem& sys, std::span<const double> x) {
  const std::size_t n = sys.size();
  double r = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double ax = sys.diag[k] * x[k];
    if (k > 0) ax += sys.lower[k] * x[k - 1];
    if (k + 1 < n) ax += sys.upper[k] * x[k + 1];
    r = std::max(r, std::abs(ax - sys.rhs[k]));
  }
  return r;
}

}  // namespace planemhd
