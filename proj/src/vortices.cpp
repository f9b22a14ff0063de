#include "glpin/vortices.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "glpin/errors.hpp"
#include "glpin/numerics.hpp"

namespace glpin {

namespace {
constexpr double kPi = std::numbers::pi;

double local_cell(const DiscMesh& m, std::size_t ring) {
  const auto& g = m.radial();
  const double dr = ring + 1 < g.size() ? g.spacing(ring) : g.spacing(ring - 1);
  return std::max(dr, g[ring] * m.dtheta());
}
}  // namespace

cplx interpolate(const Field2D& f, double x, double y) {
  const DiscMesh& m = *f.mesh;
  const auto& g = m.radial();
  const double r = std::hypot(x, y);
  if (r > 1.0 + 1e-12) throw DomainError("interpolate: point outside the disc");
  double th = std::atan2(y, x);
  if (th < 0) th += 2.0 * kPi;
  const double s = th / m.dtheta();
  const auto j0 = static_cast<std::size_t>(std::floor(s)) % m.n_theta();
  const double tj = s - std::floor(s);
  auto ring_value = [&](std::size_t i) {
    if (i == 0) return f.psi[0];
    return (1.0 - tj) * f.psi[m.node(i, j0)] + tj * f.psi[m.node(i, j0 + 1)];
  };
  const auto nodes = g.nodes();
  std::size_t i = static_cast<std::size_t>(std::upper_bound(nodes.begin(), nodes.end(), std::min(r, 1.0)) - nodes.begin());
  i = std::clamp<std::size_t>(i, 1, g.size() - 1);
  const double t = (r - g[i - 1]) / (g[i] - g[i - 1]);
  return (1.0 - t) * ring_value(i - 1) + t * ring_value(i);
}

int winding_degree(const Field2D& f, double cx, double cy, double radius, int samples) {
  if (samples < 8) throw ConfigError("winding_degree: need at least 8 samples");
  std::vector<cplx> z(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const double t = 2.0 * kPi * k / samples;
    z[k] = interpolate(f, cx + radius * std::cos(t), cy + radius * std::sin(t));
    if (std::abs(z[k]) < 1e-3) throw UndefinedDegreeError("winding_degree: field vanishes on the circle");
  }
  double total = 0.0;
  for (int k = 0; k < samples; ++k) total += std::arg(z[(k + 1) % samples] / z[k]);
  const double w = total / (2.0 * kPi);
  const double d = std::round(w);
  if (std::abs(w - d) > 0.2) throw UndefinedDegreeError("winding_degree: phase sum far from an integer");
  return static_cast<int>(d);
}

std::vector<VortexBall> detect_vortices(const Field2D& phi, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("detect_vortices: threshold must lie in (0,1)");
  const DiscMesh& m = *phi.mesh;
  const std::size_t nn = m.num_nodes(), nr = m.n_r(), nt = m.n_theta();
  std::vector<int> label(nn, -1);
  std::vector<std::vector<std::size_t>> comps;
  auto low = [&](std::size_t n) { return std::abs(phi.psi[n]) < threshold; };
  for (std::size_t s = 0; s < nn; ++s) {
    if (!low(s) || label[s] >= 0) continue;
    const int id = static_cast<int>(comps.size());
    comps.emplace_back();
    std::vector<std::size_t> stack{s};
    label[s] = id;
    while (!stack.empty()) {
      const std::size_t n = stack.back();
      stack.pop_back();
      comps[id].push_back(n);
      std::vector<std::size_t> nb;
      if (n == 0) {
        for (std::size_t j = 0; j < nt; ++j) nb.push_back(m.node(1, j));
      } else {
        const std::size_t i = m.ring_of(n), j = m.angle_of(n);
        nb.push_back(m.node(i, j + 1));
        nb.push_back(m.node(i, j + nt - 1));
        nb.push_back(m.node(i - 1, j));
        if (i + 1 < nr) nb.push_back(m.node(i + 1, j));
      }
      for (std::size_t k : nb) {
        if (low(k) && label[k] < 0) {
          label[k] = id;
          stack.push_back(k);
        }
      }
    }
  }

  std::vector<VortexBall> balls;
  for (const auto& c : comps) {
    double sx = 0.0, sy = 0.0;
    bool edge = false;
    for (std::size_t n : c) {
      sx += m.x(n);
      sy += m.y(n);
      if (m.ring_of(n) + 1 == nr) edge = true;
    }
    VortexBall b;
    b.x = sx / c.size();
    b.y = sy / c.size();
    double rad = 0.0, cell = 0.0;
    for (std::size_t n : c) {
      rad = std::max(rad, std::hypot(m.x(n) - b.x, m.y(n) - b.y));
      cell = std::max(cell, local_cell(m, m.ring_of(n)));
    }
    b.radius = rad + 2.0 * cell;
    b.touches_boundary = edge;
    balls.push_back(b);
  }

  // merge overlapping balls into their circumscribing circle
  for (bool merged = true; merged;) {
    merged = false;
    for (std::size_t p = 0; p < balls.size() && !merged; ++p) {
      for (std::size_t q = p + 1; q < balls.size() && !merged; ++q) {
        const double d = std::hypot(balls[q].x - balls[p].x, balls[q].y - balls[p].y);
        if (d >= balls[p].radius + balls[q].radius) continue;
        VortexBall b;
        if (d + balls[q].radius <= balls[p].radius) {
          b = balls[p];
        } else if (d + balls[p].radius <= balls[q].radius) {
          b = balls[q];
        } else {
          b.radius = 0.5 * (d + balls[p].radius + balls[q].radius);
          const double t = (b.radius - balls[p].radius) / d;
          b.x = balls[p].x + t * (balls[q].x - balls[p].x);
          b.y = balls[p].y + t * (balls[q].y - balls[p].y);
        }
        b.touches_boundary = balls[p].touches_boundary || balls[q].touches_boundary;
        balls[p] = b;
        balls.erase(balls.begin() + static_cast<std::ptrdiff_t>(q));
        merged = true;
      }
    }
  }

  for (auto& b : balls) {
    if (std::hypot(b.x, b.y) + b.radius >= 1.0) b.touches_boundary = true;
    b.degree = b.touches_boundary ? 0 : winding_degree(phi, b.x, b.y, b.radius);
  }
  return balls;
}

DegreeStats degree_statistics(const std::vector<VortexBall>& balls, double R, double tol) {
  DegreeStats s;
  for (const auto& b : balls) {
    if (b.degree > 0) s.d_plus += b.degree;
    if (b.degree < 0) s.d_minus -= b.degree;
    if (std::abs(std::hypot(b.x, b.y) - R) <= tol) s.d_near_interface += std::abs(b.degree);
  }
  s.d_total = s.d_plus + s.d_minus;
  return s;
}

CriticalFieldEstimate critical_field_sweep(const Problem& p, const std::vector<double>& H_grid,
                                           const PolicyOptions& opts) {
  if (H_grid.empty()) throw ConfigError("critical_field_sweep: empty H grid");
  for (std::size_t k = 1; k < H_grid.size(); ++k)
    if (!(H_grid[k] > H_grid[k - 1])) throw ConfigError("critical_field_sweep: H grid must increase");
  CriticalFieldEstimate est;
  est.k_eps_ref = p.london.k_eps;
  const double tol = std::pow(p.model.log_inv_eps(), -0.25);
  MinimizeResult prev;
  bool have_prev = false;
  for (double H : H_grid) {
    PolicyResult r = minimize_with_policy(p, H, opts, have_prev ? &prev : nullptr);
    const auto balls = detect_vortices(phi_view(r.best.psi, p.u));
    SweepPoint sp{H, r.best.energy.total, degree_statistics(balls, p.model.R(), tol), r.init, r.best.converged};
    est.table.push_back(sp);
    est.minimizers.push_back(r.best);
    prev = std::move(r.best);
    have_prev = true;
  }
  for (std::size_t k = 0; k < est.table.size(); ++k) {
    if (est.table[k].stats.d_total >= 1) {
      if (k == 0) break;
      est.H_lo = est.table[k - 1].H;
      est.H_hi = est.table[k].H;
      est.ratio = 0.5 * (est.H_lo + est.H_hi) / p.field_scale();
      return est;
    }
  }
  std::vector<int> profile;
  for (const auto& sp : est.table) profile.push_back(sp.stats.d_total);
  throw OutOfRangeError("critical_field_sweep: no 0 -> >=1 transition on the H grid", profile);
}

namespace {

// eps |n.D psi + gamma psi / eps| sampled on the ring at R, one value per angle.
double robin_norm(const DiscMesh& m, const std::vector<cplx>& psi, const std::vector<double>* radial_links,
                  double R, std::size_t iR, double eps, double gamma) {
  const auto& g = m.radial();
  const std::size_t k = std::min<std::size_t>(4, iR);
  std::vector<double> xs;
  for (std::size_t i = iR - k; i <= iR; ++i) xs.push_back(g[i]);
  const auto w = numerics::derivative_weights(xs, R);
  double sum = 0.0;
  for (std::size_t j = 0; j < m.n_theta(); ++j) {
    // transport each stencil value into the frame of the interface node
    cplx d = 0.0;
    for (std::size_t s = 0; s <= k; ++s) {
      const std::size_t i = iR - k + s;
      double phase = 0.0;
      if (radial_links)
        for (std::size_t q = i; q < iR; ++q) phase += (*radial_links)[m.radial_edge(q, j)];
      d += w[s] * psi[m.node(i, j)] * cplx(std::cos(phase), std::sin(phase));
    }
    const cplx v = d + gamma / eps * psi[m.node(iR, j)];
    sum += std::norm(v) * R * m.dtheta();
  }
  return eps * std::sqrt(sum);
}

}  // namespace

double robin_residual(const Field2D& psi, const Gauge2D& A, const RadialProfile& u, double gamma) {
  const DiscMesh& m = *psi.mesh;
  if (!m.radial().same_nodes(u.grid)) throw MeshMismatchError("robin_residual: mesh and profile differ");
  const auto balls = detect_vortices(phi_view(psi, u));
  for (const auto& b : balls)
    if (b.degree != 0 || !b.touches_boundary) throw NotApplicableError("robin_residual: vortices present");
  return robin_norm(m, psi.psi, &A.radial, u.model.R(), u.grid.interface_index(), u.model.epsilon(), gamma);
}

double robin_residual_radial(const RadialProfile& u, double gamma) {
  const double eps = u.model.epsilon(), R = u.model.R();
  const double slope = interface_slope_inner(u);
  return eps * std::abs(slope + gamma / eps * u[u.grid.interface_index()]) * std::sqrt(2.0 * kPi * R);
}

}  // namespace glpin
