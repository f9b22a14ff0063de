#include "glpin/green.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "glpin/errors.hpp"
#include "glpin/numerics.hpp"
#include "glpin/optim.hpp"

namespace glpin {

namespace {
constexpr double kPi = std::numbers::pi;

struct Coefficients {
  std::vector<double> kr, ka, mass;
};

Coefficients weighted_coefficients(const RadialProfile& u, const DiscMesh& m) {
  if (!m.radial().same_nodes(u.grid)) throw MeshMismatchError("green: mesh and profile grids differ");
  const std::size_t nr = m.n_r();
  Coefficients c;
  c.kr.resize(nr - 1);
  c.ka.assign(nr, 0.0);
  c.mass.resize(nr);
  for (std::size_t i = 0; i + 1 < nr; ++i) c.kr[i] = m.radial_weight(i) / (u[i] * u[i + 1]);
  for (std::size_t i = 1; i < nr; ++i) c.ka[i] = m.angular_weight(i) / (u[i] * u[i]);
  for (std::size_t i = 0; i < nr; ++i) c.mass[i] = m.node_volume(i == 0 ? 0 : m.node(i, 0));
  return c;
}

// Calls f(a, b, ring_a, ring_b, edge weight index) for every edge.
template <class F>
void for_each_edge(const DiscMesh& m, F&& f) {
  const std::size_t nr = m.n_r(), nt = m.n_theta();
  for (std::size_t i = 0; i + 1 < nr; ++i)
    for (std::size_t j = 0; j < nt; ++j) f(m.node(i, j), m.node(i + 1, j), true, i);
  for (std::size_t i = 1; i < nr; ++i)
    for (std::size_t j = 0; j < nt; ++j) f(m.node(i, j), m.node(i, j + 1), false, i);
}

std::vector<std::size_t> neighbours(const DiscMesh& m, std::size_t n) {
  std::vector<std::size_t> nb;
  const std::size_t nt = m.n_theta();
  if (n == 0) {
    for (std::size_t j = 0; j < nt; ++j) nb.push_back(m.node(1, j));
    return nb;
  }
  const std::size_t i = m.ring_of(n), j = m.angle_of(n);
  nb = {m.node(i, j + 1), m.node(i, j + nt - 1), m.node(i - 1, j)};
  if (i + 1 < m.n_r()) nb.push_back(m.node(i + 1, j));
  return nb;
}

}  // namespace

GreenOperator::GreenOperator(const RadialProfile& u, MeshPtr mesh)
    : u_(u),
      mesh_(std::move(mesh)),
      solver_([&] {
        auto c = weighted_coefficients(u, *mesh_);
        kr_ = c.kr;
        ka_ = c.ka;
        mass_ = c.mass;
        return PolarSolver(*mesh_, std::move(c.kr), std::move(c.ka), std::move(c.mass),
                           PolarSolver::Boundary::Dirichlet);
      }()) {}

std::vector<double> GreenOperator::solve(std::span<const double> f) const {
  if (f.size() != mesh_->num_nodes()) throw MeshMismatchError("GreenOperator::solve: load size");
  return solver_.solve(f);
}

double GreenOperator::quadratic_form(std::span<const double> g) const {
  const DiscMesh& m = *mesh_;
  double s = 0.0;
  for_each_edge(m, [&](std::size_t a, std::size_t b, bool radial, std::size_t i) {
    const double d = g[b] - g[a];
    s += (radial ? kr_[i] : ka_[i]) * d * d;
  });
  for (std::size_t n = 0; n < m.num_nodes(); ++n) s += mass_[m.ring_of(n)] * g[n] * g[n];
  return s;
}

GreenKernel GreenOperator::kernel_at_node(std::size_t node) const {
  const DiscMesh& m = *mesh_;
  if (m.ring_of(node) + 3 > m.n_r()) throw DomainError("solve_green: source within two cells of the boundary");
  GreenKernel k;
  k.source_node = node;
  k.source = {m.x(node), m.y(node)};
  std::vector<double> f(m.num_nodes(), 0.0);
  f[node] = 1.0;
  k.values = solve(f);
  k.regular_part.resize(m.num_nodes());
  for (std::size_t n = 0; n < m.num_nodes(); ++n) {
    if (n == node) continue;
    const double uu = u_[m.ring_of(n)];
    const double d = std::hypot(m.x(n) - k.source.x, m.y(n) - k.source.y);
    k.regular_part[n] = k.values[n] + uu * uu / (2.0 * kPi) * std::log(d);
  }
  const auto nb = neighbours(m, node);
  double s = 0.0;
  for (std::size_t q : nb) s += k.regular_part[q];
  k.regular_part[node] = s / static_cast<double>(nb.size());
  return k;
}

GreenKernel GreenOperator::kernel(double x, double y) const {
  if (std::hypot(x, y) >= 1.0) throw DomainError("solve_green: source outside the disc");
  return kernel_at_node(mesh_->nearest_node(x, y));
}

GreenKernel solve_green(const RadialProfile& u, double x, double y, MeshPtr mesh) {
  return GreenOperator(u, std::move(mesh)).kernel(x, y);
}

double green_log_slope(const GreenKernel& g, const DiscMesh& mesh, double r_min, double r_max) {
  std::vector<double> xs, ys;
  for (std::size_t n = 0; n < mesh.num_nodes(); ++n) {
    const double d = std::hypot(mesh.x(n) - g.source.x, mesh.y(n) - g.source.y);
    if (d > r_min && d < r_max) {
      xs.push_back(-std::log(d));
      ys.push_back(g.values[n]);
    }
  }
  if (xs.size() < 3) throw ConfigError("green_log_slope: annulus holds fewer than 3 nodes");
  return numerics::fit_slope(xs, ys);
}

double test_circle_radius(const PinningModel& model) {
  const double L = model.log_inv_eps();
  return model.R() + std::log(L) / L;
}

SiteSelection select_sites(const GreenOperator& op, int n) {
  if (n < 1) throw ConfigError("select_sites: n must be at least 1");
  const PinningModel& model = op.profile().model;
  const double eps = model.epsilon();
  SiteSelection best;
  best.r_eps = test_circle_radius(model);
  if (best.r_eps + 2.0 * eps >= 1.0) throw TooManySitesError("select_sites: site balls leave the disc");
  if (n > 1 && 2.0 * best.r_eps * std::sin(kPi / n) <= 4.0 * eps)
    throw TooManySitesError("select_sites: site balls overlap");
  bool have = false;
  for (int c = 0; c < 8; ++c) {
    SiteSelection s;
    s.r_eps = best.r_eps;
    s.offset = 2.0 * kPi / n * c / 8.0;
    for (int k = 0; k < n; ++k) {
      const double t = s.offset + 2.0 * kPi * k / n;
      s.sites.push_back({s.r_eps * std::cos(t), s.r_eps * std::sin(t)});
      const auto g = op.kernel(s.sites.back().x, s.sites.back().y);
      s.max_regular = std::max(s.max_regular, std::abs(g.regular_part[g.source_node]));
    }
    if (!have || s.max_regular < best.max_regular) {
      best = std::move(s);
      have = true;
    }
  }
  return best;
}

TestConfiguration build_test_configuration(const GreenOperator& op, int n) {
  const DiscMesh& m = op.mesh();
  const auto& g = m.radial();
  const double eps = op.profile().model.epsilon();
  TestConfiguration cfg;
  cfg.sites = select_sites(op, n);
  const auto& sites = cfg.sites.sites;
  const std::size_t nn = m.num_nodes();
  cfg.load.assign(nn, 0.0);
  cfg.mu_density.assign(nn, 0.0);
  cfg.rho.assign(nn, 1.0);
  constexpr int kSub = 64;
  for (std::size_t node = 0; node < nn; ++node) {
    const std::size_t i = m.ring_of(node);
    double dmin = 1e300;
    for (const auto& s : sites) dmin = std::min(dmin, std::hypot(m.x(node) - s.x, m.y(node) - s.y));
    cfg.rho[node] = std::clamp(dmin / eps - 1.0, 0.0, 1.0);

    // control volume [r_lo, r_hi] x [theta - dth/2, theta + dth/2]
    const double r_lo = i == 0 ? 0.0 : g.face(i - 1);
    const double r_hi = i + 1 < g.size() ? g.face(i) : 1.0;
    const double th0 = m.theta_of(node), dth = i == 0 ? 2.0 * kPi : m.dtheta();
    if (dmin - (r_hi - r_lo) - r_hi * dth > eps) continue;
    double inside = 0.0;
    const int na = i == 0 ? 8 * kSub : kSub;
    for (int p = 0; p < kSub; ++p) {
      const double r = r_lo + (p + 0.5) * (r_hi - r_lo) / kSub;
      const double w = r * (r_hi - r_lo) / kSub * dth / na;
      for (int q = 0; q < na; ++q) {
        const double t = th0 - 0.5 * dth + (q + 0.5) * dth / na;
        const double x = r * std::cos(t), y = r * std::sin(t);
        for (const auto& s : sites)
          if (std::hypot(x - s.x, y - s.y) < eps) {
            inside += w;
            break;
          }
      }
    }
    cfg.load[node] = 2.0 / (eps * eps) * inside;
    cfg.mu_density[node] = cfg.load[node] / m.node_volume(node);
  }
  cfg.h_prime = op.solve(cfg.load);
  return cfg;
}

TestEnergy test_config_energy(const GreenOperator& op, const TestConfiguration& cfg, const LondonSolution& sol,
                              double H) {
  const DiscMesh& m = op.mesh();
  const RadialProfile& u = op.profile();
  if (!sol.grid().same_nodes(u.grid)) throw MeshMismatchError("test_config_energy: London grid differs");
  const double eps = u.model.epsilon();
  const auto& h = sol.h;
  const auto& hp = cfg.h_prime;
  const auto& rho = cfg.rho;
  TestEnergy e;
  e.meissner = H * H * j0_energy(sol).value;
  double dot_cross = 0.0;
  for_each_edge(m, [&](std::size_t a, std::size_t b, bool radial, std::size_t i) {
    const std::size_t ia = m.ring_of(a), ib = m.ring_of(b);
    const double w = radial ? m.radial_weight(i) : m.angular_weight(i);
    const double kappa = w / (u[ia] * u[ib]);
    const double r2 = 0.5 * (rho[a] * rho[a] + rho[b] * rho[b]);
    const double dr = rho[b] - rho[a], dh = hp[b] - hp[a], dhe = h[ib] - h[ia];
    e.kinetic_rho += w * u[ia] * u[ib] * dr * dr;
    e.current += kappa * r2 * dh * dh;
    dot_cross += kappa * r2 * dhe * dh;
    e.amplitude += kappa * (r2 - 1.0) * dhe * dhe;
  });
  for (std::size_t n = 0; n < m.num_nodes(); ++n) {
    const std::size_t i = m.ring_of(n);
    const double V = m.node_volume(n), u2 = u[i] * u[i];
    const double q = 1.0 - rho[n] * rho[n];
    e.field += V * hp[n] * hp[n];
    e.potential += V * u2 * u2 * q * q / (2.0 * eps * eps);
    dot_cross += V * (h[i] - 1.0) * hp[n];
  }
  e.cross = 2.0 * H * dot_cross;
  e.amplitude *= H * H;
  e.total = e.meissner + e.kinetic_rho + e.current + e.field + e.potential + e.cross + e.amplitude;

  e.dirichlet = op.quadratic_form(hp);
  for (std::size_t s = 0; s < m.num_nodes(); ++s) {
    if (cfg.load[s] == 0.0) continue;
    const auto k = op.kernel_at_node(s);
    for (std::size_t t = 0; t < m.num_nodes(); ++t)
      if (cfg.load[t] != 0.0) e.green_double += cfg.load[s] * cfg.load[t] * k.values[t];
  }
  e.identity_error = std::abs(e.dirichlet - e.green_double) / std::abs(e.green_double);
  return e;
}

double green_representation(const GreenOperator& op, const TestConfiguration& cfg, std::size_t probe_node) {
  // G is symmetric: int G(x, y) mu(y) dy = sum_m load_m G(node_m, x).
  const auto k = op.kernel_at_node(probe_node);
  double s = 0.0;
  for (std::size_t n = 0; n < k.values.size(); ++n) s += cfg.load[n] * k.values[n];
  return s;
}

RenormalizedValue renormalized_energy(std::span<const Site> points, double xi2) {
  const std::size_t n = points.size();
  RenormalizedValue w;
  w.gradient.assign(2 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = points[i];
    w.confinement += 2.0 * kPi * xi2 * (p.x * p.x + p.y * p.y);
    w.gradient[2 * i] += 4.0 * kPi * xi2 * p.x;
    w.gradient[2 * i + 1] += 4.0 * kPi * xi2 * p.y;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = p.x - points[j].x, dy = p.y - points[j].y;
      const double d2 = dx * dx + dy * dy;
      if (d2 == 0.0) throw SingularInputError("renormalized_energy: coincident points");
      // each unordered pair appears twice in the sum over i != j
      w.interaction -= 2.0 * kPi * std::log(d2);
      const double c = 4.0 * kPi / d2;
      w.gradient[2 * i] -= c * dx;
      w.gradient[2 * i + 1] -= c * dy;
      w.gradient[2 * j] += c * dx;
      w.gradient[2 * j + 1] += c * dy;
    }
  }
  w.value = w.interaction + w.confinement;
  return w;
}

RenormalizedMinimum minimize_renormalized(int n, double xi2, int restarts, std::uint64_t seed) {
  if (n < 1 || n > 8) throw ConfigError("minimize_renormalized: n must lie in [1, 8]");
  if (!(xi2 > 0.0)) throw ConfigError("minimize_renormalized: xi2 must be positive");
  if (restarts < 1) throw ConfigError("minimize_renormalized: need at least one start");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const double scale = std::sqrt(n / xi2);
  auto to_sites = [](std::span<const double> x) {
    std::vector<Site> s(x.size() / 2);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = {x[2 * i], x[2 * i + 1]};
    return s;
  };
  const Objective f = [&](std::span<const double> x, std::span<double> grad) {
    const auto s = to_sites(x);
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j)
        if (s[i].x == s[j].x && s[i].y == s[j].y) {
          std::fill(grad.begin(), grad.end(), 0.0);
          return HUGE_VAL;
        }
    const auto w = renormalized_energy(s, xi2);
    std::copy(w.gradient.begin(), w.gradient.end(), grad.begin());
    return w.value;
  };
  RenormalizedMinimum best;
  bool have = false;
  LbfgsOptions opts;
  opts.max_iterations = 2000;
  opts.gradient_tolerance = 1e-13;
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> x(2 * n);
    for (auto& v : x) v = scale * uni(rng);
    const auto res = lbfgs(f, x, {}, opts);
    if (!have || res.value < best.value) {
      best.points = to_sites(x);
      best.value = res.value;
      have = true;
    }
  }
  // rotate the farthest point onto the positive x-axis
  auto far = std::max_element(best.points.begin(), best.points.end(), [](const Site& p, const Site& q) {
    return std::hypot(p.x, p.y) < std::hypot(q.x, q.y);
  });
  std::rotate(best.points.begin(), far, best.points.end());
  const double t = -std::atan2(best.points[0].y, best.points[0].x);
  const double c = std::cos(t), s = std::sin(t);
  for (auto& p : best.points) p = {c * p.x - s * p.y, s * p.x + c * p.y};
  best.points[0].y = 0.0;
  const auto w = renormalized_energy(best.points, xi2);
  best.value = w.value;
  double g2 = 0.0;
  for (double v : w.gradient) g2 += v * v;
  best.gradient_norm = std::sqrt(g2);
  return best;
}

}  // namespace glpin
