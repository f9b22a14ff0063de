#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace glpin::numerics {

/// Thomas algorithm. lower[0] and upper[n-1] are ignored. Works for real or
/// complex right-hand sides with real coefficients.
template <class T>
std::vector<T> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                 std::span<const double> upper, std::span<const T> rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n);
  std::vector<T> d(n);
  double beta = diag[0];
  if (beta == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
  c[0] = n > 1 ? upper[0] / beta : 0.0;
  d[0] = rhs[0] / beta;
  for (std::size_t i = 1; i < n; ++i) {
    beta = diag[i] - lower[i] * c[i - 1];
    if (beta == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
    c[i] = i + 1 < n ? upper[i] / beta : 0.0;
    d[i] = (rhs[i] - lower[i] * d[i - 1]) / beta;
  }
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
  return d;
}

/// Weights w such that f'(x0) ~ sum_k w_k f(x_k) (Lagrange interpolation
/// through the given abscissae).
std::vector<double> derivative_weights(std::span<const double> xs, double x0);

/// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

/// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes, weights;
};
GaussRule gauss_legendre(int n);

}  // namespace glpin::numerics
