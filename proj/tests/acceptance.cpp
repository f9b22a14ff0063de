// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "glpin/errors.hpp"
#include "glpin/green.hpp"
#include "glpin/vortices.hpp"

using namespace glpin;

namespace {

constexpr double kPi = std::numbers::pi;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Shared 2-D state between criteria.
struct VortexRun {
  Problem problem;
  MinimizeResult result;
  double H = 0.0;
};

struct Shared {
  const Problem* desk = nullptr;  // a = 0.25, eps = 0.05, 192 x 256
  std::vector<VortexRun> vortex_runs;
  double sweep_energy_top = 0.0;  // minimized G at H = 2 k|ln eps|
};

MinimizeOptions full_options() {
  MinimizeOptions o;
  o.max_iterations = 20000;
  return o;
}

// ---------------------------------------------------------------------------

Outcome c1_canonical_profile() {
  Outcome o{true, ""};
  for (double a : {0.1, 0.25, 4.0, 9.0}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto U = solve_canonical_profile(a);
    const double t = seconds_since(t0);
    const double dl = std::abs(U(-20.0) - 1.0), dr = std::abs(U(20.0) - std::sqrt(a));
    const bool ok = U.matching_residual() < 1e-10 && dl < 1e-6 && dr < 1e-6 && t < 1.0;
    o.passed = o.passed && ok;
    o.detail += fmt("a=%g res=%.1e |U(-20)-1|=%.1e |U(20)-sqrt a|=%.1e t=%.2fs; ", a, U.matching_residual(), dl, dr, t);
  }
  return o;
}

Outcome c2_gamma_sign() {
  Outcome o{true, ""};
  for (double a : {0.04, 0.1, 0.25, 0.5, 0.81, 1.2, 2.0, 4.0, 9.0}) {
    const double g = degennes_gamma(solve_canonical_profile(a));
    o.passed = o.passed && (a < 1.0 ? g > 0.0 : g < 0.0);
    o.detail += fmt("gamma(%g)=%.5f ", a, g);
  }
  return o;
}

Outcome c3_profile_convergence() {
  Outcome o{true, ""};
  const auto U = solve_canonical_profile(0.25);
  double prev = 1e300;
  for (double eps : {0.04, 0.02, 0.01}) {
    const PinningModel m(0.25, 0.5, eps);
    const auto u = solve_radial_minimizer(m, graded_radial_grid(m, 4096));
    const double d = profile_deviation(u, U);
    o.passed = o.passed && d < prev;
    prev = d;
    o.detail += fmt("eps=%g dev=%.4e ", eps, d);
  }
  o.passed = o.passed && prev < 0.05;
  return o;
}

Outcome c4_bounds() {
  Outcome o{true, ""};
  for (double a : {0.25, 4.0}) {
    const PinningModel m(a, 0.5, 0.05);
    const auto u = solve_radial_minimizer(m, graded_radial_grid(m, 4096));
    const auto sol = solve_london(u);
    bool h_ok = true;
    for (std::size_t i = 0; i + 1 < sol.h.size(); ++i)
      h_ok = h_ok && sol.h[i] > 0.0 && sol.h[i] < 1.0 && sol.h[i] <= sol.h[i + 1];
    const double q = max_abs(flux_ratio(sol));
    const bool ok = within_band(u) && is_monotone(u) && h_ok && q <= 1.0 + 1e-8;
    o.passed = o.passed && ok;
    o.detail += fmt("a=%g band=%d monotone=%d h=%d max|h'/u^2|=%.6f; ", a, within_band(u), is_monotone(u), h_ok, q);
  }
  return o;
}

Outcome c5_bessel() {
  const std::size_t n = 4096;
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  r[n / 2] = 0.5;
  const RadialProfile one{RadialGrid(r, 0.5), PinningModel(0.25, 0.5, 0.05), std::vector<double>(n, 1.0),
                          std::vector<double>(n, 0.0), 0.0, 0};
  const auto sol = solve_london(one);
  const double I0 = std::cyl_bessel_i(0.0, 1.0);
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(sol.h[i] - std::cyl_bessel_i(0.0, r[i]) / I0));
  const double kref = I0 / (2.0 * (I0 - 1.0));
  return {err < 1e-6 && std::abs(sol.k_eps - kref) < 1e-4,
          fmt("max|h - I0(r)/I0(1)|=%.2e k=%.8f ref=%.8f", err, sol.k_eps, kref)};
}

Outcome c6_attractor() {
  Outcome o{true, ""};
  {
    const PinningModel m(4.0, 0.5, 0.05);
    const auto sol = solve_london(solve_radial_minimizer(m, graded_radial_grid(m, 4096)));
    const bool centre = sol.attractor.kind == Attractor::Kind::CenterPoint;
    o.passed = centre;
    o.detail += fmt("a=4: %s; ", centre ? "CenterPoint" : "Circle");
  }
  std::vector<double> lin, sq;
  for (double eps : {0.04, 0.02, 0.01}) {
    const PinningModel m(0.1, 0.5, eps);
    const auto sol = solve_london(solve_radial_minimizer(m, graded_radial_grid(m, 4096)));
    const bool circle = sol.attractor.kind == Attractor::Kind::Circle && sol.attractor.radius > 0.5;
    o.passed = o.passed && circle;
    lin.push_back((sol.attractor.radius - 0.5) / eps);
    sq.push_back((sol.attractor.radius - 0.5) / std::sqrt(eps));
    o.detail += fmt("a=0.1 eps=%g R_eps=%.5f (R_eps-R)/eps=%.4f (R_eps-R)/sqrt(eps)=%.5f; ", eps,
                    sol.attractor.radius, lin.back(), sq.back());
  }
  const bool inc = lin[0] < lin[1] && lin[1] < lin[2];
  const bool dec = sq[0] > sq[1] && sq[1] > sq[2];
  o.passed = o.passed && inc && dec;
  o.detail += fmt("increasing=%d decreasing=%d", inc, dec);
  return o;
}

Outcome c7_split(const Shared& s) {
  const auto& p = *s.desk;
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> U(0.0, 2.0 * p.field_scale());
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    auto [psi, A] = random_smooth_state(p.mesh, 1000 + k);
    const auto e = split_energy(psi, A, p.u, U(rng));
    worst = std::max(worst, std::abs(e.total - e.split_c0 - e.split_f) / (1.0 + std::abs(e.total)));
  }
  return {worst <= 1e-10, fmt("max |G - C0 - F|/(1+|G|) = %.2e over 100 pairs", worst)};
}

Outcome c8_gauge(const Shared& s) {
  const auto& p = *s.desk;
  const auto& m = *p.mesh;
  auto [psi, A] = random_smooth_state(p.mesh, 8);
  const double H = p.field_scale();
  const double E0 = gl_energy(psi, A, p.model, H).total;
  std::mt19937_64 rng(81);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double c0 = 3 * U(rng), c1 = 4 * U(rng), c2 = 4 * U(rng), c3 = 2 * U(rng);
    std::vector<double> chi(m.num_nodes());
    for (std::size_t n = 0; n < chi.size(); ++n)
      chi[n] = c0 * std::sin(c1 * m.x(n) + c2 * m.y(n)) + c3 * (m.x(n) * m.x(n) - m.y(n));
    Field2D q = psi;
    Gauge2D B = A;
    gauge_transform(q, B, chi);
    worst = std::max(worst, std::abs(gl_energy(q, B, p.model, H).total / E0 - 1.0));
  }
  return {worst <= 1e-8, fmt("max relative change %.2e over 20 transforms", worst)};
}

Outcome c9_zero_field(const Shared& s) {
  const auto& p = *s.desk;
  auto [psi, A] = random_smooth_state(p.mesh, 9);
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = minimize(p.model, 0.0, psi, A, full_options());
  const double t = seconds_since(t0);
  double err = 0.0;
  for (std::size_t n = 0; n < r.psi.psi.size(); ++n)
    err = std::max(err, std::abs(std::abs(r.psi.psi[n]) - p.u[p.mesh->ring_of(n)]));
  return {err < 0.02 && t <= 600.0,
          fmt("max ||psi| - u| = %.2e, %d iterations, converged=%d, %.0fs", err, r.iterations, r.converged, t)};
}

Outcome c10_nucleation(Shared& s) {
  const auto& p = *s.desk;
  const std::vector<double> factors{0.3, 0.5, 1.0, 2.0, 3.0};
  std::vector<double> grid;
  for (double f : factors) grid.push_back(f * p.field_scale());
  PolicyOptions po;
  po.minimize.max_iterations = 2500;
  CriticalFieldEstimate est;
  try {
    est = critical_field_sweep(p, grid, po);
  } catch (const OutOfRangeError& e) {
    return {false, std::string("no transition: ") + e.what()};
  }
  Outcome o{true, ""};
  int d_half = -1, d_two = -1;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    o.detail += fmt("H/k|ln eps|=%.1f D=%d (%s); ", factors[k], est.table[k].stats.d_total, est.table[k].init.c_str());
    if (factors[k] == 0.5) d_half = est.table[k].stats.d_total;
    if (factors[k] == 2.0) {
      d_two = est.table[k].stats.d_total;
      // carry the H = 2 state on to a converged vortex run
      const auto& w = est.minimizers[k];
      auto r = minimize(p.model, grid[k], w.psi, w.A, full_options());
      s.sweep_energy_top = r.energy.total;
      s.vortex_runs.push_back({p, std::move(r), grid[k]});
    }
  }
  o.passed = d_half == 0 && d_two >= 1 && est.ratio >= 0.5 && est.ratio <= 2.0;
  o.detail += fmt("bracket [%.3f, %.3f] ratio %.3f", est.H_lo, est.H_hi, est.ratio);
  return o;
}

Outcome c11_locus(Shared& s) {
  Outcome o{true, ""};
  for (double a : {0.1, 4.0}) {
    const Problem p = make_problem(PinningModel(a, 0.5, 0.05), 192, 256);
    const double H = 2.0 * p.field_scale();
    PolicyOptions po;
    po.minimize = full_options();
    auto pr = minimize_with_policy(p, H, po);
    const auto balls = detect_vortices(phi_view(pr.best.psi, p.u));
    int nonzero = 0;
    double worst = 0.0;
    for (const auto& b : balls) {
      if (b.degree == 0) continue;
      ++nonzero;
      const double r = std::hypot(b.x, b.y);
      worst = std::max(worst, a < 1.0 ? std::abs(r - p.london.attractor.radius) : r);
    }
    const double bound = a < 1.0 ? 0.1 : 0.2;
    o.passed = o.passed && nonzero >= 1 && worst < bound;
    o.detail += fmt("a=%g: %d vortices, %s=%.4f (bound %.1f), init %s; ", a, nonzero,
                    a < 1.0 ? "max ||a_i|-R_eps|" : "max |a_i|", worst, bound, pr.init.c_str());
    s.vortex_runs.push_back({p, std::move(pr.best), H});
  }
  return o;
}

Outcome c12_sum_rule(const Shared& s) {
  Outcome o{true, ""};
  int used = 0;
  for (const auto& run : s.vortex_runs) {
    if (!run.result.converged) {
      o.detail += fmt("a=%g skipped (not converged); ", run.problem.model.a());
      continue;
    }
    const auto phi = phi_view(run.result.psi, run.problem.u);
    const auto balls = detect_vortices(phi);
    int signed_sum = 0, D = 0;
    for (const auto& b : balls) {
      signed_sum += b.degree;
      D += std::abs(b.degree);
    }
    if (D == 0) continue;
    ++used;
    const double mu = vorticity_integral(phi, run.result.A);
    const double err = std::abs(mu - 2 * kPi * signed_sum), bound = 0.1 * 2 * kPi * std::max(1, D);
    o.passed = o.passed && err < bound;
    o.detail += fmt("a=%g: int mu/2pi=%.4f degree sum=%d error/bound=%.3f; ", run.problem.model.a(), mu / (2 * kPi),
                    signed_sum, err / bound);
  }
  o.passed = o.passed && used > 0;
  return o;
}

Outcome c13_green(const Shared& s) {
  const auto& p = *s.desk;
  const GreenOperator op(p.u, p.mesh);
  std::mt19937_64 rng(131);
  std::uniform_real_distribution<double> U(-0.6, 0.6);
  double sym = 0.0;
  for (int k = 0; k < 5; ++k) {
    const auto g1 = op.kernel(U(rng), U(rng));
    const auto g2 = op.kernel(U(rng), U(rng));
    sym = std::max(sym, std::abs(g1.values[g2.source_node] - g2.values[g1.source_node]));
  }
  // the 3-10 eps annulus must sit well inside the disc and away from the mass-term scale
  const PinningModel fine(0.25, 0.5, 0.02);
  const Problem pf = make_problem(fine, 256, 512);
  const GreenOperator opf(pf.u, pf.mesh);
  const auto g = opf.kernel(0.05, 0.0);
  const double uy = pf.u[pf.mesh->ring_of(g.source_node)];
  const double slope = green_log_slope(g, *pf.mesh, 3 * fine.epsilon(), 10 * fine.epsilon());
  const double slope_err = std::abs(slope / (uy * uy / (2 * kPi)) - 1.0);
  double ident = 0.0;
  for (int n = 1; n <= 3; ++n)
    ident = std::max(ident, test_config_energy(op, build_test_configuration(op, n), p.london, 1.0).identity_error);
  return {sym < 1e-6 && slope_err < 0.05 && ident < 1e-3,
          fmt("symmetry %.2e, log slope rel. error %.3f (eps=0.02), double-integral identity %.2e", sym, slope_err,
              ident)};
}

Outcome c14_upper_bound(const Shared& s) {
  const auto& p = *s.desk;
  if (s.sweep_energy_top == 0.0) return {false, "no minimized energy at H = 2 k|ln eps|"};
  const double H = 2.0 * p.field_scale();
  auto [u0, A0] = meissner_configuration(p.u, p.london, 0.0, p.mesh);
  const double C0 = gl_energy(u0, A0, p.model, 0.0).total;
  const double F_min = s.sweep_energy_top - C0;
  const GreenOperator op(p.u, p.mesh);
  Outcome o{true, fmt("min F=%.4f; ", F_min)};
  for (int n = 1; n <= 3; ++n) {
    const auto e = test_config_energy(op, build_test_configuration(op, n), p.london, H);
    o.passed = o.passed && e.total >= F_min;
    o.detail += fmt("n=%d F_test=%.4f; ", n, e.total);
  }
  return o;
}

Outcome c15_renormalized() {
  std::mt19937_64 rng(151);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double grad = 0.0;
  for (int t = 0; t < 10; ++t) {
    std::vector<Site> pts(5);
    for (auto& q : pts) q = {U(rng), U(rng)};
    const double xi2 = 0.5 + std::abs(U(rng));
    const auto w = renormalized_energy(pts, xi2);
    for (std::size_t k = 0; k < 10; ++k) {
      auto a = pts, b = pts;
      const double h = 1e-6;
      (k % 2 ? a[k / 2].y : a[k / 2].x) += h;
      (k % 2 ? b[k / 2].y : b[k / 2].x) -= h;
      const double fd = (renormalized_energy(a, xi2).value - renormalized_energy(b, xi2).value) / (2 * h);
      grad = std::max(grad, std::abs(fd - w.gradient[k]) / std::max(1.0, std::abs(w.gradient[k])));
    }
  }
  // 1-D oracle: -4 pi ln s + pi xi2 s^2 minimized by golden section
  auto f = [](double s) { return -4 * kPi * std::log(s) + kPi * s * s; };
  double lo = 1e-3, hi = 10.0;
  const double g = (std::sqrt(5.0) - 1) / 2;
  for (int k = 0; k < 200; ++k) {
    const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    if (f(a) < f(b))
      hi = b;
    else
      lo = a;
  }
  const double s_oracle = 0.5 * (lo + hi);
  const auto m2 = minimize_renormalized(2, 1.0);
  const double s2 = std::hypot(m2.points[0].x - m2.points[1].x, m2.points[0].y - m2.points[1].y);
  const double pair_err = std::max(std::abs(s2 - s_oracle), std::abs(m2.points[0].x + m2.points[1].x));
  const auto m3 = minimize_renormalized(3, 1.0);
  auto d = [&](int i, int j) { return std::hypot(m3.points[i].x - m3.points[j].x, m3.points[i].y - m3.points[j].y); };
  const double tri = std::max({std::abs(d(0, 1) - d(1, 2)), std::abs(d(1, 2) - d(2, 0)), std::abs(d(2, 0) - d(0, 1))});
  return {grad < 1e-6 && pair_err < 1e-6 && tri < 1e-6,
          fmt("gradient rel. error %.2e, pair separation %.9f vs oracle %.9f, triangle side spread %.2e", grad, s2,
              s_oracle, tri)};
}

Outcome c16_robin() {
  Outcome o{true, ""};
  double prev = 1e300;
  for (auto [eps, n_r, n_theta] : {std::tuple{0.05, 192, 256}, std::tuple{0.025, 256, 384}}) {
    const Problem p = make_problem(PinningModel(0.25, 0.5, eps), n_r, n_theta);
    const double gamma = degennes_gamma(solve_canonical_profile(0.25));
    const double H = 0.5 * p.field_scale();
    auto [psi, A] = meissner_configuration(p.u, p.london, H, p.mesh);
    const auto r = minimize(p.model, H, psi, A, full_options());
    double res = 0.0;
    try {
      res = robin_residual(r.psi, r.A, p.u, gamma);
    } catch (const NotApplicableError&) {
      return {false, fmt("eps=%g run is not vortex-free", eps)};
    }
    o.passed = o.passed && res < prev;
    prev = res;
    o.detail += fmt("eps=%g H=%.3f residual=%.5e; ", eps, H, res);
  }
  return o;
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  const Problem desk = make_problem(PinningModel(0.25, 0.5, 0.05), 192, 256);
  Shared shared;
  shared.desk = &desk;

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 canonical profile", c1_canonical_profile},
      {"2 gamma sign", c2_gamma_sign},
      {"3 profile convergence", c3_profile_convergence},
      {"4 bounds and monotonicity", c4_bounds},
      {"5 London Bessel oracle", c5_bessel},
      {"6 attractor dichotomy", c6_attractor},
      {"7 splitting identity", [&] { return c7_split(shared); }},
      {"8 gauge invariance", [&] { return c8_gauge(shared); }},
      {"9 zero-field recovery", [&] { return c9_zero_field(shared); }},
      {"10 nucleation regimes", [&] { return c10_nucleation(shared); }},
      {"11 pinning locus", [&] { return c11_locus(shared); }},
      {"12 vorticity sum rule", [&] { return c12_sum_rule(shared); }},
      {"13 Green kernel", [&] { return c13_green(shared); }},
      {"14 upper bound", [&] { return c14_upper_bound(shared); }},
      {"15 renormalized energy", c15_renormalized},
      {"16 Robin residual", c16_robin},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failed;
    std::printf("[%s] criterion %s (%.1fs): %s\n", o.passed ? "PASS" : "FAIL", name.c_str(), seconds_since(t0),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed, total %.0fs\n", failed, criteria.size(), seconds_since(start));
  return failed == 0 ? 0 : 1;
}
