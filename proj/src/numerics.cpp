#include "glpin/numerics.hpp"

#include <cmath>
#include <numbers>

namespace glpin::numerics {

std::vector<double> derivative_weights(std::span<const double> xs, double x0) {
  // d/dx of the Lagrange basis l_k at x0.
  const std::size_t n = xs.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double denom = 1.0;
    for (std::size_t m = 0; m < n; ++m)
      if (m != k) denom *= xs[k] - xs[m];
    double num = 0.0;
    for (std::size_t skip = 0; skip < n; ++skip) {
      if (skip == k) continue;
      double prod = 1.0;
      for (std::size_t m = 0; m < n; ++m)
        if (m != k && m != skip) prod *= x0 - xs[m];
      num += prod;
    }
    w[k] = num / denom;
  }
  return w;
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::runtime_error("fit_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / den;
}

GaussRule gauss_legendre(int n) {
  GaussRule g;
  g.nodes.resize(n);
  g.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        g.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        break;
      }
      g.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    g.nodes[i] = x;
  }
  return g;
}

}  // namespace glpin::numerics
