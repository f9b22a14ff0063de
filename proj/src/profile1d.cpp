#include "glpin/profile1d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "glpin/errors.hpp"
#include "glpin/numerics.hpp"

namespace glpin {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kHalfWidth = 24.0;
constexpr int kStepsPerUnit = 512;

struct Shot {
  double u = 0, du = 0;  // values at the origin
  bool ok = false;
  std::vector<double> us, dus;  // samples ordered by increasing x
};

// Deviation variables: v = U - 1 on the left, w = U - sqrt(a) on the right.
// v'' = (2v + v^2)(1 + v),  w'' = (2 s w + w^2)(s + w) with s = sqrt(a).
// Tails start on the exact stable manifold: v' = (2v + v^2)/sqrt2,
// w' = -(2 s w + w^2)/sqrt2.
template <class Rhs>
Shot integrate(double start, double slope, double h, int steps, Rhs rhs, double offset, bool store,
               bool reverse) {
  Shot shot;
  double y = start, dy = slope;
  if (store) {
    shot.us.reserve(steps + 1);
    shot.dus.reserve(steps + 1);
    shot.us.push_back(y);
    shot.dus.push_back(dy);
  }
  for (int k = 0; k < steps; ++k) {
    const double k1y = dy, k1v = rhs(y);
    const double k2y = dy + 0.5 * h * k1v, k2v = rhs(y + 0.5 * h * k1y);
    const double k3y = dy + 0.5 * h * k2v, k3v = rhs(y + 0.5 * h * k2y);
    const double k4y = dy + h * k3v, k4v = rhs(y + h * k3y);
    y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
    dy += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    if (!std::isfinite(y) || std::abs(y) > 1e6) return shot;
    if (store) {
      shot.us.push_back(y);
      shot.dus.push_back(dy);
    }
  }
  if (store && reverse) {
    std::reverse(shot.us.begin(), shot.us.end());
    std::reverse(shot.dus.begin(), shot.dus.end());
  }
  shot.u = offset + y;
  shot.du = dy;
  shot.ok = true;
  return shot;
}

struct Shooter {
  double a, s;
  double h = 1.0 / kStepsPerUnit;
  int steps = static_cast<int>(kHalfWidth * kStepsPerUnit);
  double sign_left, sign_right;

  Shooter(double a_) : a(a_), s(std::sqrt(a_)) {
    sign_left = a < 1.0 ? -1.0 : 1.0;
    sign_right = -sign_left;
  }

  Shot left(double p, bool store = false) const {
    const double v = sign_left * std::exp(p);
    auto rhs = [](double y) { return (2.0 * y + y * y) * (1.0 + y); };
    return integrate(v, (2.0 * v + v * v) / kSqrt2, h, steps, rhs, 1.0, store, false);
  }
  Shot right(double q, bool store = false) const {
    const double w = sign_right * std::exp(q);
    const double sa = s;
    auto rhs = [sa](double y) { return (2.0 * sa * y + y * y) * (sa + y); };
    // integrate from x = L down to 0: step -h
    return integrate(w, -(2.0 * sa * w + w * w) / kSqrt2, -h, steps, rhs, sa, store, true);
  }
};

double hermite(const std::vector<double>& u, const std::vector<double>& du, double x0, double h, double x) {
  const double t = (x - x0) / h;
  auto k = static_cast<std::size_t>(std::floor(t));
  k = std::min(k, u.size() - 2);
  const double s = t - static_cast<double>(k);
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  return h00 * u[k] + h10 * h * du[k] + h01 * u[k + 1] + h11 * h * du[k + 1];
}

double hermite_derivative(const std::vector<double>& u, const std::vector<double>& du, double x0, double h,
                          double x) {
  const double t = (x - x0) / h;
  auto k = static_cast<std::size_t>(std::floor(t));
  k = std::min(k, u.size() - 2);
  const double s = t - static_cast<double>(k);
  const double d00 = 6 * s * s - 6 * s, d10 = 3 * s * s - 4 * s + 1;
  const double d01 = -6 * s * s + 6 * s, d11 = 3 * s * s - 2 * s;
  return (d00 * u[k] + d01 * u[k + 1]) / h + d10 * du[k] + d11 * du[k + 1];
}

}  // namespace

CanonicalProfile solve_canonical_profile(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("canonical profile: a must be positive");
  if (a == 1.0) throw DegenerateModelError("canonical profile: a = 1 only admits the trivial solution U = 1");

  Shooter sh(a);
  const double L = kHalfWidth;
  // Initial tails by bisection onto U(0)^2 = (1 + a)/2, where the two first
  // integrals agree; Newton then polishes the C1 matching.
  const double u0 = std::sqrt(0.5 * (1.0 + a));
  auto bisect = [&](auto shoot, double level, double target, double rate) {
    const double gap = std::abs(target - level);
    double lo = std::log(gap) - rate * L - 40.0, hi = std::log(gap);
    for (int k = 0; k < 200 && hi - lo > 1e-14 * std::abs(hi); ++k) {
      const double mid = 0.5 * (lo + hi);
      const Shot t = shoot(mid);
      (t.ok && std::abs(t.u - level) < gap ? lo : hi) = mid;
    }
    return lo;
  };
  double p = bisect([&](double x) { return sh.left(x); }, 1.0, u0, kSqrt2);
  double q = bisect([&](double x) { return sh.right(x); }, sh.s, u0, std::sqrt(2.0 * a));

  auto residual = [&](double pp, double qq, Shot& l, Shot& r) {
    l = sh.left(pp);
    r = sh.right(qq);
    if (!l.ok || !r.ok) return std::array<double, 2>{NAN, NAN};
    return std::array<double, 2>{l.u - r.u, l.du - r.du};
  };
  auto norm = [](const std::array<double, 2>& f) { return std::max(std::abs(f[0]), std::abs(f[1])); };

  Shot l, r;
  auto f = residual(p, q, l, r);
  int it = 0;
  for (; it < 100 && norm(f) > 1e-13; ++it) {
    const double d = 1e-7;
    Shot lp = sh.left(p + d), rq = sh.right(q + d);
    if (!lp.ok || !rq.ok) {
      p -= 0.5;
      q -= 0.5;
      f = residual(p, q, l, r);
      continue;
    }
    const double j11 = (lp.u - l.u) / d, j21 = (lp.du - l.du) / d;
    const double j12 = -(rq.u - r.u) / d, j22 = -(rq.du - r.du) / d;
    const double det = j11 * j22 - j12 * j21;
    double dp = -(f[0] * j22 - j12 * f[1]) / det;
    double dq = -(j11 * f[1] - j21 * f[0]) / det;
    const double cap = 2.0;
    const double big = std::max(std::abs(dp), std::abs(dq));
    if (big > cap) {
      dp *= cap / big;
      dq *= cap / big;
    }
    double t = 1.0;
    Shot ln, rn;
    auto fn = residual(p + t * dp, q + t * dq, ln, rn);
    for (int k = 0; k < 40 && !(norm(fn) < norm(f)); ++k) {
      t *= 0.5;
      fn = residual(p + t * dp, q + t * dq, ln, rn);
    }
    if (!(norm(fn) < norm(f))) break;  // stagnated at rounding level
    p += t * dp;
    q += t * dq;
    f = fn;
    l = std::move(ln);
    r = std::move(rn);
  }
  if (!(norm(f) < 1e-10)) throw SolverError("canonical profile shooting did not converge", norm(f));

  CanonicalProfile U;
  U.a_ = a;
  U.L_ = L;
  U.h_ = sh.h;
  Shot ls = sh.left(p, true), rs = sh.right(q, true);
  U.left_u_ = std::move(ls.us);
  U.left_du_ = std::move(ls.dus);
  U.right_u_ = std::move(rs.us);
  U.right_du_ = std::move(rs.dus);
  U.u0_ = 0.5 * (ls.u + rs.u);
  U.value_jump_ = ls.u - rs.u;
  U.du_left_ = ls.du;
  U.du_right_ = rs.du;
  U.iterations_ = it;
  U.beta1_ = (1.0 + U.u0_) / (1.0 - U.u0_);
  U.beta2_ = (sh.s + U.u0_) / (sh.s - U.u0_);
  U.alpha_ = std::sqrt(-U.beta2_ / U.beta1_);
  return U;
}

double CanonicalProfile::matching_residual() const noexcept {
  return std::max(std::abs(value_jump_), std::abs(du_left_ - du_right_));
}

double CanonicalProfile::deviation(double x) const {
  if (x <= -L_) return left_u_.front() * std::exp(kSqrt2 * (x + L_));
  if (x >= L_) return right_u_.back() * std::exp(-std::sqrt(2.0 * a_) * (x - L_));
  if (x <= 0.0) return hermite(left_u_, left_du_, -L_, h_, x);
  return hermite(right_u_, right_du_, 0.0, h_, x);
}

double CanonicalProfile::operator()(double x) const { return (x <= 0.0 ? 1.0 : std::sqrt(a_)) + deviation(x); }

double CanonicalProfile::derivative(double x) const {
  if (x <= -L_) return kSqrt2 * left_u_.front() * std::exp(kSqrt2 * (x + L_));
  if (x >= L_) {
    const double k = std::sqrt(2.0 * a_);
    return -k * right_u_.back() * std::exp(-k * (x - L_));
  }
  if (x <= 0.0) return hermite_derivative(left_u_, left_du_, -L_, h_, x);
  return hermite_derivative(right_u_, right_du_, 0.0, h_, x);
}

double CanonicalProfile::gamma() const noexcept { return -0.5 * (du_left_ + du_right_) / u0_; }

double degennes_gamma(const CanonicalProfile& profile) { return profile.gamma(); }

ClosedFormAudit audit_closed_form(const CanonicalProfile& U) {
  ClosedFormAudit audit;
  const double a = U.a(), s = std::sqrt(a);
  audit.alpha = (1.0 + s - std::sqrt(2.0 * (1.0 + a))) / (1.0 - s);
  const double al = audit.alpha;
  audit.beta1 = al * (1.0 + al * s) / (al - s);
  audit.beta2 = -al * al * audit.beta1;
  audit.gamma = al * (a * al * al * al + s * al * al + a * al + s) /
                (al * al * al + (4.0 - s) * al * al - 3.0 * s * al + a);
  audit.sign_table_holds = a < 1.0 ? (audit.beta1 > 1.0 && audit.beta2 < -1.0)
                                   : (audit.beta1 < -1.0 && audit.beta2 > 1.0);

  auto closed = [&](double x) {
    if (x <= 0.0) {
      const double e = audit.beta1 * std::exp(-std::numbers::sqrt2 * x);
      return (e - 1.0) / (e + 1.0);
    }
    const double e = audit.beta2 * std::exp(std::sqrt(2.0 / a) * x);
    return s * (e - 1.0) / (e + 1.0);
  };
  double dev = 0.0;
  for (int k = 0; k <= 4000; ++k) {
    const double x = -20.0 + 40.0 * k / 4000.0;
    const double d = std::abs(closed(x) - U(x));
    dev = std::isfinite(d) ? std::max(dev, d) : INFINITY;
  }
  audit.max_deviation = dev;
  audit.gamma_deviation = std::abs(audit.gamma - U.gamma());
  audit.consistent = dev <= 1e-6 && audit.gamma_deviation <= 1e-6 && audit.sign_table_holds;

  std::ostringstream os;
  os.precision(8);
  os << "closed-form audit a=" << a << ": alpha=" << audit.alpha << " beta1=" << audit.beta1
     << " beta2=" << audit.beta2 << " gamma=" << audit.gamma << " | shooting beta1=" << U.beta1()
     << " beta2=" << U.beta2() << " gamma=" << U.gamma() << " | sup|U_closed-U|=" << audit.max_deviation
     << " sign_table=" << (audit.sign_table_holds ? "ok" : "violated")
     << (audit.consistent ? " -> consistent" : " -> DISCREPANCY");
  audit.report = os.str();
  return audit;
}

// ---------------------------------------------------------------------------

namespace {

// Nodes are carried as u_i = c_i + d_i with c_i the local level, so that the
// far-field deviations keep full relative precision.
struct Levels {
  std::vector<double> c;
  double a, s;
  Levels(const PinningModel& m, const RadialGrid& g) : c(g.size()), a(m.a()), s(m.sqrt_a()) {
    for (std::size_t i = 0; i < g.size(); ++i) c[i] = g[i] <= g.R() ? 1.0 : s;
  }
  // (1 - u^2) and (a - u^2) evaluated without cancellation on the matching side
  double inner_gap(std::size_t i, double d) const {
    return c[i] == 1.0 ? -d * (2.0 + d) : 1.0 - (c[i] + d) * (c[i] + d);
  }
  double outer_gap(std::size_t i, double d) const {
    return c[i] == 1.0 ? a - (1.0 + d) * (1.0 + d) : -d * (2.0 * s + d);
  }
};

struct Assembly {
  std::vector<double> F, lower, diag, upper;
};

Assembly assemble(const PinningModel& model, const RadialGrid& g, const Levels& lv, std::span<const double> d,
                  bool jacobian) {
  const std::size_t n = g.size();
  const double ie2 = 1.0 / (model.epsilon() * model.epsilon());
  const double a = model.a();
  Assembly A;
  A.F.assign(n, 0.0);
  if (jacobian) {
    A.lower.assign(n, 0.0);
    A.diag.assign(n, 0.0);
    A.upper.assign(n, 0.0);
  }
  for (std::size_t f = 0; f + 1 < n; ++f) {
    const double W = g.face_weight(f);
    const double diff = (lv.c[f] - lv.c[f + 1]) + (d[f] - d[f + 1]);
    A.F[f] += W * diff;
    A.F[f + 1] -= W * diff;
    if (jacobian) {
      A.diag[f] += W;
      A.diag[f + 1] += W;
      A.upper[f] = -W;
      A.lower[f + 1] = -W;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double u = lv.c[i] + d[i];
    const double vin = g.volume_inner(i), vout = g.volume_outer(i);
    A.F[i] -= u * (vin * lv.inner_gap(i, d[i]) + vout * lv.outer_gap(i, d[i])) * ie2;
    if (jacobian) A.diag[i] -= (vin * (1.0 - 3.0 * u * u) + vout * (a - 3.0 * u * u)) * ie2;
  }
  return A;
}

double scaled_max(const PinningModel& model, const RadialGrid& g, const std::vector<double>& F) {
  const double e2 = model.epsilon() * model.epsilon();
  double m = 0.0;
  for (std::size_t i = 0; i < F.size(); ++i) m = std::max(m, std::abs(F[i]) * e2 / g.volume(i));
  return m;
}

std::vector<double> deviations(const Levels& lv, std::span<const double> u) {
  std::vector<double> d(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) d[i] = u[i] - lv.c[i];
  return d;
}

}  // namespace

std::vector<double> radial_residual(const PinningModel& model, const RadialGrid& grid, std::span<const double> u) {
  const Levels lv(model, grid);
  auto A = assemble(model, grid, lv, deviations(lv, u), false);
  const double e2 = model.epsilon() * model.epsilon();
  for (std::size_t i = 0; i < A.F.size(); ++i) A.F[i] *= e2 / grid.volume(i);
  return A.F;
}

RadialProfile solve_radial_minimizer(const PinningModel& model, const RadialGrid& grid,
                                     const RadialSolveOptions& opts) {
  if (grid.R() != model.R()) throw MeshMismatchError("radial grid interface differs from the model's R");
  const CanonicalProfile U = solve_canonical_profile(model.a());
  const Levels lv(model, grid);
  const double eps = model.epsilon();
  const double band = model.upper_level() - model.lower_level();

  // U((r - R)/eps) clamped into the band; clamping acts on the deviation so
  // that tiny far-field values keep their sign and relative size.
  std::vector<double> d(grid.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double x = (grid[i] - model.R()) / eps;
    const double toward = lv.c[i] == model.lower_level() ? 1.0 : -1.0;
    const double mag = std::clamp(toward * U.deviation(x), 1e-300, band - 1e-6);
    d[i] = toward * mag;
  }

  auto A = assemble(model, grid, lv, d, true);
  double res = scaled_max(model, grid, A.F);
  int it = 0;
  for (; it < opts.max_iterations && res > opts.tolerance; ++it) {
    std::vector<double> rhs(A.F.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = -A.F[i];
    const auto step = numerics::solve_tridiagonal<double>(A.lower, A.diag, A.upper, rhs);
    double t = 1.0;
    std::vector<double> trial(d.size());
    double trial_res = INFINITY;
    Assembly At;
    for (int k = 0; k <= opts.max_halvings; ++k) {
      for (std::size_t i = 0; i < d.size(); ++i) trial[i] = d[i] + t * step[i];
      At = assemble(model, grid, lv, trial, true);
      trial_res = scaled_max(model, grid, At.F);
      if (trial_res < res) break;
      t *= 0.5;
    }
    if (!(trial_res < res)) break;  // rounding floor reached
    d.swap(trial);
    A = std::move(At);
    res = trial_res;
  }
  if (!(res <= 1e-8)) throw SolverError("radial Newton failed to converge", res);

  std::vector<double> u(d.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = lv.c[i] + d[i];
  RadialProfile out{grid, model, std::move(u), std::move(d), res, it};
  if (!within_band(out))
    throw PostconditionError("radial minimizer left the band (min(1,sqrt a), max(1,sqrt a))");
  return out;
}

bool within_band(const RadialProfile& u) {
  const double lower = u.model.lower_level(), upper = u.model.upper_level();
  const double s = u.model.sqrt_a();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double level = u.grid[i] <= u.grid.R() ? 1.0 : s;
    const double d = u.deviation[i];
    // the side touching the local level is decided by the sign of d
    const bool low_ok = level == lower ? d > 0.0 : u[i] > lower;
    const bool high_ok = level == upper ? d < 0.0 : u[i] < upper;
    if (!low_ok || !high_ok) return false;
  }
  return true;
}

double zero_field_energy(const PinningModel& model, const RadialGrid& g, std::span<const double> u) {
  const double ie2 = 1.0 / (model.epsilon() * model.epsilon());
  const Levels lv(model, g);
  double e = 0.0;
  for (std::size_t f = 0; f + 1 < g.size(); ++f) {
    const double d = u[f + 1] - u[f];
    e += g.face_weight(f) * d * d;
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double di = u[i] - lv.c[i];
    const double gi = lv.inner_gap(i, di), go = lv.outer_gap(i, di);
    e += 0.5 * ie2 * (g.volume_inner(i) * gi * gi + g.volume_outer(i) * go * go);
  }
  return e;
}

EnergyScalar energy_c0(const RadialProfile& u) { return {zero_field_energy(u.model, u.grid, u.values)}; }

double interface_decay_rate(const RadialProfile& u, DecaySide side) {
  const double R = u.model.R(), eps = u.model.epsilon();
  const double lo = side == DecaySide::Inner ? R - 10.0 * eps : R + 3.0 * eps;
  const double hi = side == DecaySide::Inner ? R - 3.0 * eps : R + 10.0 * eps;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = u.grid[i];
    if (r < lo || r > hi || (side == DecaySide::Outer && r <= R)) continue;
    const double dev = std::abs(u.deviation[i]);
    if (dev == 0.0) continue;
    xs.push_back(r);
    ys.push_back(std::log(dev));
  }
  if (xs.size() < 3) throw ConfigError("interface_decay_rate: fit window holds fewer than 3 usable nodes");
  const double slope = numerics::fit_slope(xs, ys);
  return side == DecaySide::Inner ? eps * slope : -eps * slope;
}

double interface_slope_inner(const RadialProfile& u) {
  const std::size_t iR = u.grid.interface_index();
  const std::size_t k = std::min<std::size_t>(4, iR);
  std::vector<double> xs, fs;
  for (std::size_t i = iR - k; i <= iR; ++i) {
    xs.push_back(u.grid[i]);
    fs.push_back(u.deviation[i]);
  }
  const auto w = numerics::derivative_weights(xs, u.model.R());
  double d = 0.0;
  for (std::size_t m = 0; m < w.size(); ++m) d += w[m] * fs[m];
  return d;
}

double robin_ratio(const RadialProfile& u, double gamma) {
  const std::size_t iR = u.grid.interface_index();
  return u.model.epsilon() * interface_slope_inner(u) / u[iR] + gamma;
}

double profile_deviation(const RadialProfile& u, const CanonicalProfile& U, double window) {
  const double R = u.model.R(), eps = u.model.epsilon();
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = u.grid[i];
    if (window > 0.0 && std::abs(r - R) > window) continue;
    m = std::max(m, std::abs(u.deviation[i] - U.deviation((r - R) / eps)));
  }
  return m;
}

bool is_monotone(const RadialProfile& u) {
  const bool increasing = u.model.a() > 1.0;
  for (std::size_t i = 1; i < u.size(); ++i) {
    if (increasing ? u[i] < u[i - 1] : u[i] > u[i - 1]) return false;
  }
  return true;
}

}  // namespace glpin
