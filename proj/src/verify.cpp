#include "glpin/verify.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "glpin/green.hpp"
#include "glpin/vortices.hpp"

namespace glpin {

namespace {
constexpr double kPi = std::numbers::pi;

struct Recorder {
  std::vector<Check>& out;
  std::string module;
  // passes when value <= bound
  void at_most(const std::string& name, double value, double bound) {
    out.push_back({module, name, value <= bound, value, bound});
  }
  void holds(const std::string& name, bool ok) { out.push_back({module, name, ok, ok ? 1.0 : 0.0, 1.0}); }
};

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void profile_checks(std::vector<Check>& out, const Problem& p, const std::string& tag) {
  Recorder r{out, "profile1d"};
  const auto U = solve_canonical_profile(p.model.a());
  r.at_most(tag + " shooting residual", U.matching_residual(), 1e-10);
  const double g = degennes_gamma(U);
  r.holds(tag + " gamma sign", p.model.a() < 1.0 ? g > 0.0 : g < 0.0);
  r.at_most(tag + " radial residual", max_abs(radial_residual(p.model, p.u.grid, p.u.values)), 1e-8);
  r.holds(tag + " strict band", within_band(p.u));
  r.holds(tag + " monotone", is_monotone(p.u));
}

void london_checks(std::vector<Check>& out, const Problem& p, const std::string& tag) {
  Recorder r{out, "london"};
  const auto& s = p.london;
  bool h_ok = true;
  for (std::size_t i = 0; i + 1 < s.h.size(); ++i)
    h_ok = h_ok && s.h[i] > 0.0 && s.h[i] < 1.0 && s.h[i] <= s.h[i + 1] && s.xi[i] <= 0.0;
  r.holds(tag + " 0 < h < 1, h nondecreasing, xi <= 0", h_ok);
  r.at_most(tag + " max |h'/u^2|", max_abs(flux_ratio(s)), 1.0 + 1e-8);
  r.at_most(tag + " interface flux jump", interface_flux_jump(s), 1e-8);
  const bool centre = s.attractor.kind == Attractor::Kind::CenterPoint;
  r.holds(tag + " attractor kind", p.model.a() > 1.0 ? centre : (!centre && s.attractor.radius > p.model.R()));
  r.holds(tag + " k_eps > 0", s.k_eps > 0.0);
}

void gl2d_checks(std::vector<Check>& out, const Problem& p, const std::string& tag, const VerifyOptions& opts) {
  Recorder r{out, "gl2d"};
  const auto& m = *p.mesh;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-1.0, 1.0);

  double split = 0.0, gauge = 0.0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    auto [psi, A] = random_smooth_state(p.mesh, 40 + s);
    const auto e = split_energy(psi, A, p.u, 3.0);
    split = std::max(split, std::abs(e.total - e.split_c0 - e.split_f) / (1.0 + std::abs(e.total)));
    std::vector<double> chi(m.num_nodes());
    const double c0 = U(rng), c1 = 3 * U(rng), c2 = 3 * U(rng);
    for (std::size_t n = 0; n < chi.size(); ++n) chi[n] = 2 * c0 * std::sin(c1 * m.x(n) + c2 * m.y(n));
    Field2D q = psi;
    Gauge2D B = A;
    gauge_transform(q, B, chi);
    gauge = std::max(gauge, std::abs(gl_energy(q, B, p.model, 3.0).total / e.total - 1.0));
  }
  r.at_most(tag + " split identity", split, 1e-10);
  r.at_most(tag + " gauge invariance", gauge, 1e-8);

  {
    auto [psi, A] = random_smooth_state(p.mesh, 5);
    const auto g = gl_energy_gradient(psi, A, p.model, 3.0);
    std::normal_distribution<double> N;
    std::vector<cplx> dp(psi.psi.size());
    std::vector<double> dr(A.radial.size()), da(A.angular.size());
    double slope = 0.0;
    for (std::size_t n = 0; n < dp.size(); ++n) {
      dp[n] = {N(rng), N(rng)};
      slope += g.d_psi[n].real() * dp[n].real() + g.d_psi[n].imag() * dp[n].imag();
    }
    for (std::size_t e = 0; e < dr.size(); ++e) slope += g.d_radial[e] * (dr[e] = N(rng));
    for (std::size_t e = 0; e < da.size(); ++e) slope += g.d_angular[e] * (da[e] = N(rng));
    auto at = [&](double t) {
      Field2D q = psi;
      Gauge2D B = A;
      for (std::size_t n = 0; n < dp.size(); ++n) q.psi[n] += t * dp[n];
      for (std::size_t e = 0; e < dr.size(); ++e) B.radial[e] += t * dr[e];
      for (std::size_t e = 0; e < da.size(); ++e) B.angular[e] += t * da[e];
      return gl_energy(q, B, p.model, 3.0).total;
    };
    const double t = 1e-5;
    r.at_most(tag + " gradient vs finite differences", std::abs((at(t) - at(-t)) / (2 * t) / slope - 1.0), 1e-5);
  }

  const double C0 = energy_c0(p.u).value, J0 = j0_energy(p.london).value;
  {
    auto [psi, A] = meissner_configuration(p.u, p.london, 1.0, p.mesh);
    r.at_most(tag + " Meissner energy vs C0 + J0", std::abs(gl_energy(psi, A, p.model, 1.0).total / (C0 + J0) - 1.0),
              1e-4);
    const auto h = h_field(A);
    double dev = 0.0;
    for (std::size_t j = 0; j < m.n_theta(); ++j) dev = std::max(dev, std::abs(h[m.cell(m.n_r() - 2, j)] - 1.0));
    r.at_most(tag + " curl A at r = 1", dev, 1e-3);
    r.at_most(tag + " Meissner vorticity / H", max_abs(vorticity(phi_view(psi, p.u), A)), 0.1);
  }

  // vortex-free run below the first critical field
  const double H = 0.5 * p.field_scale();
  auto [psi, A] = meissner_configuration(p.u, p.london, H, p.mesh);
  MinimizeOptions mo;
  mo.max_iterations = opts.max_iterations;
  const auto res = minimize(p.model, H, psi, A, mo);
  r.holds(tag + " descent", res.monotone);
  double excess = -1e300;
  for (std::size_t n = 0; n < m.num_nodes(); ++n)
    excess = std::max(excess, std::abs(res.psi.psi[n]) - p.u[m.ring_of(n)]);
  r.at_most(tag + " |psi| - u_eps", excess, 0.02);
  const auto balls = detect_vortices(phi_view(res.psi, p.u));
  const auto stats = degree_statistics(balls, p.model.R(), std::pow(p.model.log_inv_eps(), -0.25));
  r.at_most(tag + " D_total at H = 0.5 k|ln eps|", stats.d_total, 0);

  Recorder v{out, "vortices"};
  const double gamma = degennes_gamma(solve_canonical_profile(p.model.a()));
  {
    auto [psi0, A0] = meissner_configuration(p.u, p.london, 0.0, p.mesh);
    const double r2 = robin_residual(psi0, A0, p.u, gamma), r1 = robin_residual_radial(p.u, gamma);
    v.at_most(tag + " Robin residual vs radial", std::abs(r2 / r1 - 1.0), 1e-3);
    v.holds(tag + " Robin residual discriminates gamma sign", robin_residual(psi0, A0, p.u, -gamma) > r2);
  }
  Field2D syn = zero_field(p.mesh);
  for (auto& z : syn.psi) z = 1.0;
  const VortexSeed seed{0.25, -0.15, 1};
  imprint_vortices(syn, std::span(&seed, 1), p.model.epsilon());
  const auto sb = detect_vortices(syn);
  v.holds(tag + " synthetic vortex detected with degree 1", sb.size() == 1 && sb[0].degree == 1);
  v.at_most(tag + " synthetic vorticity integral / 2 pi - 1",
            std::abs(vorticity_integral(syn, zero_gauge(p.mesh)) / (2 * kPi) - 1.0), 0.05);
}

void green_checks(std::vector<Check>& out, const Problem& p, const std::string& tag) {
  Recorder r{out, "green"};
  const GreenOperator op(p.u, p.mesh);
  const auto& m = *p.mesh;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(-0.6, 0.6);
  double sym = 0.0, bnd = 0.0;
  bool positive = true;
  for (int k = 0; k < 5; ++k) {
    const auto g1 = op.kernel(U(rng), U(rng));
    const auto g2 = op.kernel(U(rng), U(rng));
    sym = std::max(sym, std::abs(g1.values[g2.source_node] - g2.values[g1.source_node]));
    for (std::size_t j = 0; j < m.n_theta(); ++j) bnd = std::max(bnd, std::abs(g1.values[m.node(m.n_r() - 1, j)]));
    for (double v : g1.values) positive = positive && v >= 0.0;
  }
  r.at_most(tag + " kernel symmetry", sym, 1e-6);
  r.at_most(tag + " kernel on the boundary", bnd, 0.0);
  r.holds(tag + " kernel nonnegative", positive);

  const auto cfg = build_test_configuration(op, 1);
  double mass = 0.0;
  for (double v : cfg.load) mass += v;
  r.at_most(tag + " test source mass / 2 pi n - 1", std::abs(mass / (2 * kPi) - 1.0), 1e-3);
  const auto e = test_config_energy(op, cfg, p.london, p.field_scale());
  r.at_most(tag + " Green double-integral identity", e.identity_error, 1e-3);
  double rep = 0.0;
  for (std::size_t probe : {std::size_t{0}, m.node(m.n_r() / 2, 5), m.node(m.n_r() - 10, m.n_theta() / 3)})
    rep = std::max(rep, std::abs(green_representation(op, cfg, probe) - cfg.h_prime[probe]));
  r.at_most(tag + " Green representation of h'", rep, 1e-4);

  if (p.london.attractor.kind == Attractor::Kind::CenterPoint) {
    const double xi2 = xi_second_derivative_at_origin(p.london);
    r.holds(tag + " xi''(0) > 0", xi2 > 0.0);
    std::vector<Site> pts{{0.3, 0.1}, {-0.2, 0.25}, {0.05, -0.4}};
    const auto w = renormalized_energy(pts, xi2);
    double err = 0.0;
    for (std::size_t k = 0; k < 6; ++k) {
      auto a = pts, b = pts;
      const double h = 1e-6;
      (k % 2 ? a[k / 2].y : a[k / 2].x) += h;
      (k % 2 ? b[k / 2].y : b[k / 2].x) -= h;
      const double fd = (renormalized_energy(a, xi2).value - renormalized_energy(b, xi2).value) / (2 * h);
      err = std::max(err, std::abs(fd - w.gradient[k]) / std::max(1.0, std::abs(w.gradient[k])));
    }
    r.at_most(tag + " renormalized gradient", err, 1e-6);
    auto rot = pts;
    for (auto& q : rot) q = {std::cos(1.0) * q.x - std::sin(1.0) * q.y, std::sin(1.0) * q.x + std::cos(1.0) * q.y};
    r.at_most(tag + " renormalized rotation invariance",
              std::abs(renormalized_energy(rot, xi2).value - w.value) / std::abs(w.value), 1e-12);
  }
}

}  // namespace

std::vector<Check> verify_invariants(const VerifyOptions& opts) {
  std::vector<Check> out;
  for (double a : {0.25, 4.0}) {
    const std::string tag = a < 1.0 ? "a=0.25" : "a=4";
    const Problem p = make_problem(PinningModel(a, 0.5, opts.epsilon), opts.n_r, opts.n_theta);
    profile_checks(out, p, tag);
    london_checks(out, p, tag);
    gl2d_checks(out, p, tag, opts);
    green_checks(out, p, tag);
  }
  return out;
}

}  // namespace glpin
