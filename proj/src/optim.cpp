#include "glpin/optim.hpp"

#include <cmath>
#include <algorithm>

namespace glpin {

namespace {
double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
}  // namespace

LbfgsResult lbfgs(const Objective& f, std::vector<double>& x, std::span<const double> inv_diag,
                  const LbfgsOptions& opts) {
  const std::size_t n = x.size();
  std::vector<double> P(n, 1.0);
  if (!inv_diag.empty()) std::copy(inv_diag.begin(), inv_diag.end(), P.begin());

  // ring buffer of correction pairs
  const auto M = static_cast<std::size_t>(std::max(1, opts.memory));
  std::vector<std::vector<double>> S(M, std::vector<double>(n)), Y(M, std::vector<double>(n));
  std::vector<double> rho(M), alpha(M);
  std::size_t head = 0, count = 0;

  LbfgsResult res;
  std::vector<double> g(n), gn(n), d(n), xn(n);
  double fx = f(x, g);
  ++res.evaluations;

  auto pnorm = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i] * v[i] * P[i];
    return std::sqrt(s);
  };

  for (int it = 0; it < opts.max_iterations; ++it) {
    res.gradient_norm = pnorm(g);
    if (res.gradient_norm <= opts.gradient_tolerance) {
      res.gradient_converged = true;
      break;
    }
    // two-loop recursion, newest pair first
    d = g;
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t slot = (head + M - 1 - k) % M;
      alpha[slot] = rho[slot] * dot(S[slot], d);
      const double a = alpha[slot];
      const double* y = Y[slot].data();
      for (std::size_t i = 0; i < n; ++i) d[i] -= a * y[i];
    }
    double gamma = 1.0;
    if (count > 0) {
      const std::size_t last = (head + M - 1) % M;
      double yhy = 0.0;
      for (std::size_t i = 0; i < n; ++i) yhy += Y[last][i] * Y[last][i] * P[i];
      gamma = 1.0 / (rho[last] * yhy);
    }
    for (std::size_t i = 0; i < n; ++i) d[i] *= gamma * P[i];
    for (std::size_t k = count; k-- > 0;) {
      const std::size_t slot = (head + M - 1 - k) % M;
      const double b = alpha[slot] - rho[slot] * dot(Y[slot], d);
      const double* s = S[slot].data();
      for (std::size_t i = 0; i < n; ++i) d[i] += b * s[i];
    }
    for (double& v : d) v = -v;
    double slope = dot(g, d);
    if (!(slope < 0.0)) {  // memory went bad: fall back to preconditioned steepest descent
      count = 0;
      for (std::size_t i = 0; i < n; ++i) d[i] = -P[i] * g[i];
      slope = dot(g, d);
    }

    double t = 1.0;
    double fn = 0.0;
    bool ok = false;
    for (int k = 0; k < opts.max_backtracks; ++k) {
      for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + t * d[i];
      fn = f(xn, gn);
      ++res.evaluations;
      if (std::isfinite(fn) && fn <= fx + opts.armijo * t * slope) {
        ok = true;
        break;
      }
      t *= 0.5;
    }
    if (!ok || !(fn <= fx)) {
      res.stalled = true;
      break;
    }
    std::vector<double>& s = S[head];
    std::vector<double>& y = Y[head];
    double sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = xn[i] - x[i];
      y[i] = gn[i] - g[i];
      sy += s[i] * y[i];
    }
    if (sy > 1e-300) {
      rho[head] = 1.0 / sy;
      head = (head + 1) % M;
      count = std::min(count + 1, M);
    }
    x.swap(xn);
    g.swap(gn);
    fx = fn;
    res.iterations = it + 1;
  }
  res.value = fx;
  res.gradient_norm = pnorm(g);
  return res;
}

}  // namespace glpin
