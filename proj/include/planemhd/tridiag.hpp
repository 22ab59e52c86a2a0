#pragma once

#include <span>
#include <vector>

namespace planemhd {

/// Row k reads lower[k] x[k-1] + diag[k] x[k] + upper[k] x[k+1] = rhs[k];
/// lower[0] and upper[n-1] are ignored.
struct TridiagonalSystem {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;
  std::vector<double> rhs;

  explicit TridiagonalSystem(std::size_t n = 0) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0) {}
  std::size_t size() const { return diag.size(); }
};

/// Thomas algorithm (forward elimination, back substitution).  Throws
/// std::runtime_error on a zero pivot.
std::vector<double> tridiag_solve(std::span<const double> lower, std::span<const double> diag,
                                  std::span<const double> upper, std::span<const double> rhs);

inline std::vector<double> tridiag_solve(const TridiagonalSystem& sys) {
  return tridiag_solve(sys.lower, sys.diag, sys.upper, sys.rhs);
}

/// max_k |(A x - rhs)_k|
double tridiag_residual_inf(const TridiagonalSystem& sys, std::span<const double> x);

}  // namespace planemhd
