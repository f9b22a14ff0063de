#include "glpin/london.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "glpin/errors.hpp"
#include "glpin/numerics.hpp"

namespace glpin {

namespace {

double face_kappa(const RadialProfile& u, std::size_t f) {
  return u.grid.face_weight(f) / (u[f] * u[f + 1]);
}

}  // namespace

LondonSolution solve_london(const RadialProfile& u) {
  const RadialGrid& g = u.grid;
  const std::size_t n = g.size();
  for (double v : u.values)
    if (!(v > 0.0)) throw SolverError("solve_london: coefficient u must be positive", v);

  // unknowns h_0..h_{n-2}; h_{n-1} = 1
  const std::size_t m = n - 1;
  std::vector<double> lo(m, 0.0), di(m, 0.0), up(m, 0.0), rhs(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    di[i] = g.volume(i);
    if (i > 0) {
      const double k = face_kappa(u, i - 1);
      di[i] += k;
      lo[i] = -k;
    }
    const double k = face_kappa(u, i);
    di[i] += k;
    if (i + 1 < m)
      up[i] = -k;
    else
      rhs[i] = k;  // boundary value 1
  }
  std::vector<double> h;
  try {
    h = numerics::solve_tridiagonal<double>(lo, di, up, rhs);
  } catch (const std::exception& e) {
    throw SolverError(std::string("solve_london: ") + e.what(), NAN);
  }
  h.push_back(1.0);

  LondonSolution sol{u, std::move(h), {}, 0, 0, {}, 0, {}};
  sol.face_flux.resize(n - 1);
  for (std::size_t f = 0; f + 1 < n; ++f) sol.face_flux[f] = face_kappa(u, f) * (sol.h[f + 1] - sol.h[f]);

  double res = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double in = i > 0 ? sol.face_flux[i - 1] : 0.0;
    // row residual relative to the row's diagonal
    res = std::max(res, std::abs(in - sol.face_flux[i] + g.volume(i) * sol.h[i]) / di[i]);
  }
  sol.residual = res;
  if (!(res <= 1e-10)) throw SolverError("solve_london: relative residual above 1e-10", res);

  sol.xi.resize(n);
  double lam = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sol.xi[i] = (sol.h[i] - 1.0) / (u[i] * u[i]);
    lam = std::max(lam, -sol.xi[i]);
  }
  sol.lambda_eps = lam;
  sol.k_eps = 1.0 / (2.0 * lam);
  sol.attractor = locate_attractor(sol);

  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < n && !(sol.h[i] > 0.0 && sol.h[i] < 1.0))
      throw PostconditionError("solve_london: 0 < h < 1 violated");
    if (i > 0 && sol.h[i] < sol.h[i - 1]) throw PostconditionError("solve_london: h not nondecreasing");
    if (sol.xi[i] > 0.0) throw PostconditionError("solve_london: xi > 0");
  }
  for (double q : flux_ratio(sol))
    if (std::abs(q) > 1.0 + 1e-8) throw PostconditionError("solve_london: |h'/u^2| > 1");
  if (!(sol.k_eps > 0.0) || !std::isfinite(sol.k_eps)) throw PostconditionError("solve_london: k_eps not positive");
  return sol;
}

Landscape pinning_landscape(const LondonSolution& sol) { return {sol.xi, sol.lambda_eps, sol.k_eps}; }

Attractor locate_attractor(const LondonSolution& sol) {
  const RadialGrid& g = sol.grid();
  double best = -INFINITY;
  for (double x : sol.xi) best = std::max(best, -x);
  std::size_t arg = 0;
  for (std::size_t i = 0; i < sol.xi.size(); ++i) {
    if (-sol.xi[i] >= best - 1e-12) {
      arg = i;
      break;
    }
  }
  Attractor a;
  a.node = arg;
  if (arg <= 1) return a;
  a.kind = Attractor::Kind::Circle;
  a.radius = g[arg];
  if (arg + 1 < g.size()) {
    // vertex of the parabola through (r_{k-1}, r_k, r_{k+1})
    const double x0 = g[arg - 1], x1 = g[arg], x2 = g[arg + 1];
    const double y0 = -sol.xi[arg - 1], y1 = -sol.xi[arg], y2 = -sol.xi[arg + 1];
    const double d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
    const double c2 = (d12 - d01) / (x2 - x0);
    if (c2 < 0.0) {
      const double v = 0.5 * (x0 + x1) - d01 / (2.0 * c2);
      a.radius = std::clamp(v, x0, x2);
    }
  }
  return a;
}

EnergyScalar j0_energy(const LondonSolution& sol) {
  const RadialGrid& g = sol.grid();
  double e = 0.0;
  for (std::size_t f = 0; f + 1 < g.size(); ++f) {
    const double d = sol.h[f + 1] - sol.h[f];
    e += face_kappa(sol.u, f) * d * d;
  }
  for (std::size_t i = 0; i < g.size(); ++i) e += g.volume(i) * (sol.h[i] - 1.0) * (sol.h[i] - 1.0);
  return {e};
}

LandscapeGap landscape_gap(const LondonSolution& sol, double window) {
  if (sol.attractor.kind != Attractor::Kind::Circle)
    throw NotApplicableError("landscape_gap: attractor is the centre point");
  LandscapeGap out;
  const double R = sol.u.model.R();
  out.window = window > 0.0 ? window : std::pow(sol.u.model.log_inv_eps(), -0.25);
  out.g.resize(sol.xi.size());
  out.margin = INFINITY;
  for (std::size_t i = 0; i < sol.xi.size(); ++i) {
    out.g[i] = sol.xi[i] + sol.lambda_eps;
    if (std::abs(sol.grid()[i] - R) >= out.window) {
      out.region_empty = false;
      out.margin = std::min(out.margin, out.g[i]);
    }
  }
  if (out.region_empty) out.margin = NAN;
  return out;
}

std::vector<double> flux_ratio(const LondonSolution& sol) {
  std::vector<double> q(sol.face_flux.size());
  for (std::size_t f = 0; f < q.size(); ++f)
    q[f] = sol.face_flux[f] / (2.0 * std::numbers::pi * sol.grid().face(f));
  return q;
}

double interface_flux_jump(const LondonSolution& sol) {
  const RadialGrid& g = sol.grid();
  const std::size_t k = g.interface_index();
  const double hR = sol.h[k];
  const double left = sol.face_flux[k - 1] + g.volume_inner(k) * hR;
  const double right = sol.face_flux[k] - g.volume_outer(k) * hR;
  return std::abs(left - right) / (2.0 * std::numbers::pi * g.R());
}

std::vector<double> ring_flux(const LondonSolution& sol) {
  const RadialGrid& g = sol.grid();
  const std::size_t n = g.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double lo = g.face(i - 1);
    out[i] = sol.face_flux[i - 1] + std::numbers::pi * (g[i] * g[i] - lo * lo) * sol.h[i];
  }
  return out;
}

double xi_second_derivative_at_origin(const LondonSolution& sol) {
  const RadialGrid& g = sol.grid();
  const double r1 = g[1] * g[1], r2 = g[2] * g[2];
  const double b1 = sol.xi[1] - sol.xi[0], b2 = sol.xi[2] - sol.xi[0];
  // c1 r^2 + c2 r^4 through the two offsets
  const double det = r1 * r2 * r2 - r2 * r1 * r1;
  const double c1 = (b1 * r2 * r2 - b2 * r1 * r1) / det;
  return 2.0 * c1;
}

}  // namespace glpin
