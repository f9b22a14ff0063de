#include "glpin/gl2d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "glpin/errors.hpp"
#include "glpin/optim.hpp"
#include "glpin/polar_solver.hpp"

namespace glpin {

namespace {

constexpr double kPi = std::numbers::pi;

void check_pair(const Field2D& psi, const Gauge2D& A) {
  if (!psi.mesh || !A.mesh) throw MeshMismatchError("field without mesh");
  if (psi.mesh != A.mesh &&
      !(psi.mesh->radial().same_nodes(A.mesh->radial()) && psi.mesh->n_theta() == A.mesh->n_theta()))
    throw MeshMismatchError("psi and A live on different meshes");
  const DiscMesh& m = *psi.mesh;
  if (psi.psi.size() != m.num_nodes() || A.radial.size() != m.num_radial_edges() ||
      A.angular.size() != m.num_angular_edges())
    throw MeshMismatchError("field sizes do not match the mesh");
}

void check_model(const DiscMesh& m, const PinningModel& model) {
  if (m.radial().R() != model.R()) throw MeshMismatchError("mesh interface radius differs from the model's R");
}

// Per-ring geometry shared by every evaluation.
struct Geometry {
  std::size_t nr, nt;
  std::vector<double> wr, wa, vin, vout, area;
  explicit Geometry(const DiscMesh& m) : nr(m.n_r()), nt(m.n_theta()) {
    wr.resize(nr - 1);
    area.resize(nr - 1);
    for (std::size_t i = 0; i + 1 < nr; ++i) {
      wr[i] = m.radial_weight(i);
      area[i] = m.cell_area(i);
    }
    wa.assign(nr, 0.0);
    vin.resize(nr);
    vout.resize(nr);
    for (std::size_t i = 0; i < nr; ++i) {
      if (i > 0) wa[i] = m.angular_weight(i);
      const std::size_t node = i == 0 ? 0 : m.node(i, 0);
      vin[i] = m.node_volume_inner(node);
      vout[i] = m.node_volume_outer(node);
    }
  }
};

// Raw evaluation on flat arrays; gradient pointers may be null.
double evaluate(const DiscMesh& m, const Geometry& G, const PinningModel& model, double H, const cplx* psi,
                const double* tr, const double* ta, EnergyBreakdown* parts, cplx* gp, double* gr, double* ga) {
  const std::size_t nr = G.nr, nt = G.nt;
  const bool grad = gp != nullptr;
  if (grad) {
    std::fill(gp, gp + m.num_nodes(), cplx(0.0));
    std::fill(gr, gr + m.num_radial_edges(), 0.0);
    std::fill(ga, ga + m.num_angular_edges(), 0.0);
  }
  double kin = 0.0, pot = 0.0, fld = 0.0;

  auto link = [&](std::size_t a, std::size_t b, double theta, double w, double* gt) {
    const cplx e(std::cos(theta), -std::sin(theta));
    const cplx z = psi[b] * e;
    const cplx D = z - psi[a];
    kin += w * std::norm(D);
    if (grad) {
      gp[b] += 2.0 * w * D * std::conj(e);
      gp[a] -= 2.0 * w * D;
      *gt += 2.0 * w * (std::conj(D) * z).imag();
    }
  };
  for (std::size_t i = 0; i + 1 < nr; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t e = m.radial_edge(i, j);
      link(m.node(i, j), m.node(i + 1, j), tr[e], G.wr[i], grad ? gr + e : nullptr);
    }
  }
  for (std::size_t i = 1; i < nr; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t e = m.angular_edge(i, j);
      link(m.node(i, j), m.node(i, j + 1), ta[e], G.wa[i], grad ? ga + e : nullptr);
    }
  }

  const double ie2 = 1.0 / (model.epsilon() * model.epsilon());
  const double a = model.a();
  for (std::size_t n = 0; n < m.num_nodes(); ++n) {
    const std::size_t ring = m.ring_of(n);
    const double s = std::norm(psi[n]);
    const double gi = 1.0 - s, go = a - s;
    pot += 0.5 * ie2 * (G.vin[ring] * gi * gi + G.vout[ring] * go * go);
    if (grad) gp[n] -= 2.0 * ie2 * (G.vin[ring] * gi + G.vout[ring] * go) * psi[n];
  }

  for (std::size_t i = 0; i + 1 < nr; ++i) {
    const double ar = G.area[i];
    for (std::size_t j = 0; j < nt; ++j) {
      double circ = tr[m.radial_edge(i, j)] + ta[m.angular_edge(i + 1, j)] - tr[m.radial_edge(i, j + 1)];
      if (i > 0) circ -= ta[m.angular_edge(i, j)];
      const double d = circ - H * ar;
      fld += d * d / ar;
      if (grad) {
        const double g = 2.0 * d / ar;
        gr[m.radial_edge(i, j)] += g;
        ga[m.angular_edge(i + 1, j)] += g;
        gr[m.radial_edge(i, j + 1)] -= g;
        if (i > 0) ga[m.angular_edge(i, j)] -= g;
      }
    }
  }
  if (parts) {
    parts->kinetic = kin;
    parts->potential = pot;
    parts->field = fld;
    parts->total = kin + pot + fld;
  }
  return kin + pot + fld;
}

// Radial-edge and angular-edge coefficient arrays for the unweighted
// Laplacian used by the gauge projection.
PolarSolver laplacian_solver(const DiscMesh& m) {
  const Geometry G(m);
  return PolarSolver(m, G.wr, G.wa, std::vector<double>(m.n_r(), 0.0), PolarSolver::Boundary::Neumann);
}

double smooth_noise(const std::vector<std::array<double, 4>>& modes, double x, double y) {
  double s = 0.0, norm = 0.0;
  for (const auto& c : modes) {
    s += c[0] * std::cos(c[1] * x + c[2] * y + c[3]);
    norm += std::abs(c[0]);
  }
  return s / norm;
}

}  // namespace

MeshPtr make_mesh(const PinningModel& model, std::size_t n_r, std::size_t n_theta) {
  return std::make_shared<const DiscMesh>(graded_radial_grid(model, n_r), n_theta);
}

Field2D zero_field(MeshPtr mesh) {
  const std::size_t n = mesh->num_nodes();
  return {std::move(mesh), std::vector<cplx>(n, 0.0)};
}

Gauge2D zero_gauge(MeshPtr mesh) {
  const std::size_t nr = mesh->num_radial_edges(), na = mesh->num_angular_edges();
  return {std::move(mesh), std::vector<double>(nr, 0.0), std::vector<double>(na, 0.0)};
}

std::vector<double> cell_circulation(const Gauge2D& A) {
  const DiscMesh& m = *A.mesh;
  std::vector<double> c(m.num_cells());
  for (std::size_t i = 0; i + 1 < m.n_r(); ++i) {
    for (std::size_t j = 0; j < m.n_theta(); ++j) {
      double circ = A.radial[m.radial_edge(i, j)] + A.angular[m.angular_edge(i + 1, j)] -
                    A.radial[m.radial_edge(i, j + 1)];
      if (i > 0) circ -= A.angular[m.angular_edge(i, j)];
      c[m.cell(i, j)] = circ;
    }
  }
  return c;
}

std::vector<double> h_field(const Gauge2D& A) {
  const DiscMesh& m = *A.mesh;
  auto c = cell_circulation(A);
  for (std::size_t i = 0; i + 1 < m.n_r(); ++i)
    for (std::size_t j = 0; j < m.n_theta(); ++j) c[m.cell(i, j)] /= m.cell_area(i);
  return c;
}

NodalPotential nodal_potential(const Gauge2D& A) {
  const DiscMesh& m = *A.mesh;
  const std::size_t nr = m.n_r(), nt = m.n_theta();
  NodalPotential out{std::vector<double>(m.num_nodes(), 0.0), std::vector<double>(m.num_nodes(), 0.0)};
  // centre: least-squares vector from the spokes, reported in the theta = 0 frame
  {
    double ax = 0.0, ay = 0.0;
    for (std::size_t j = 0; j < nt; ++j) {
      const double t = A.radial[m.radial_edge(0, j)] / m.radial_length(0), th = m.dtheta() * j;
      ax += 2.0 * t * std::cos(th) / nt;
      ay += 2.0 * t * std::sin(th) / nt;
    }
    out.a_r[0] = ax;
    out.a_theta[0] = ay;
  }
  for (std::size_t i = 1; i < nr; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t n = m.node(i, j);
      const double inner = A.radial[m.radial_edge(i - 1, j)] / m.radial_length(i - 1);
      out.a_r[n] = i + 1 < nr ? 0.5 * (inner + A.radial[m.radial_edge(i, j)] / m.radial_length(i)) : 0.0;
      out.a_theta[n] = 0.5 * (A.angular[m.angular_edge(i, j + nt - 1)] + A.angular[m.angular_edge(i, j)]) /
                       m.angular_length(i);
    }
  }
  return out;
}

std::vector<double> divergence(const Gauge2D& A) {
  const DiscMesh& m = *A.mesh;
  const Geometry G(m);
  std::vector<double> div(m.num_nodes(), 0.0);
  for (std::size_t i = 0; i + 1 < m.n_r(); ++i) {
    for (std::size_t j = 0; j < m.n_theta(); ++j) {
      const double f = G.wr[i] * A.radial[m.radial_edge(i, j)];
      div[m.node(i, j)] += f;
      div[m.node(i + 1, j)] -= f;
    }
  }
  for (std::size_t i = 1; i < m.n_r(); ++i) {
    for (std::size_t j = 0; j < m.n_theta(); ++j) {
      const double f = G.wa[i] * A.angular[m.angular_edge(i, j)];
      div[m.node(i, j)] += f;
      div[m.node(i, j + 1)] -= f;
    }
  }
  return div;
}

double coulomb_residual(const Gauge2D& A) {
  const DiscMesh& m = *A.mesh;
  const auto div = divergence(A);
  double r = 0.0;
  for (std::size_t n = 0; n < div.size(); ++n) r = std::max(r, std::abs(div[n]) / m.node_volume(n));
  return r;
}

double boundary_normal_residual(const Gauge2D& A) {
  const DiscMesh& m = *A.mesh;
  const auto div = divergence(A);
  double r = 0.0;
  for (std::size_t j = 0; j < m.n_theta(); ++j)
    r = std::max(r, std::abs(div[m.node(m.n_r() - 1, j)]) / m.dtheta());
  return r;
}

EnergyBreakdown gl_energy(const Field2D& psi, const Gauge2D& A, const PinningModel& model, double H) {
  check_pair(psi, A);
  check_model(*psi.mesh, model);
  const Geometry G(*psi.mesh);
  EnergyBreakdown e;
  evaluate(*psi.mesh, G, model, H, psi.psi.data(), A.radial.data(), A.angular.data(), &e, nullptr, nullptr,
           nullptr);
  return e;
}

EnergyGradient gl_energy_gradient(const Field2D& psi, const Gauge2D& A, const PinningModel& model, double H) {
  check_pair(psi, A);
  check_model(*psi.mesh, model);
  const DiscMesh& m = *psi.mesh;
  const Geometry G(m);
  EnergyGradient out;
  out.d_psi.resize(m.num_nodes());
  out.d_radial.resize(m.num_radial_edges());
  out.d_angular.resize(m.num_angular_edges());
  evaluate(m, G, model, H, psi.psi.data(), A.radial.data(), A.angular.data(), &out.energy, out.d_psi.data(),
           out.d_radial.data(), out.d_angular.data());
  return out;
}

Field2D phi_view(const Field2D& psi, const RadialProfile& u) {
  const DiscMesh& m = *psi.mesh;
  if (!m.radial().same_nodes(u.grid)) throw MeshMismatchError("phi_view: mesh and profile grids differ");
  Field2D phi{psi.mesh, psi.psi};
  for (std::size_t n = 0; n < phi.psi.size(); ++n) phi.psi[n] /= u[m.ring_of(n)];
  return phi;
}

EnergyBreakdown split_energy(const Field2D& psi, const Gauge2D& A, const RadialProfile& u, double H) {
  check_pair(psi, A);
  const DiscMesh& m = *psi.mesh;
  if (!m.radial().same_nodes(u.grid)) throw MeshMismatchError("split_energy: mesh and profile grids differ");
  for (double v : u.values)
    if (!(v > 0.0)) throw PostconditionError("split_energy: profile has a zero node");
  const PinningModel& model = u.model;
  EnergyBreakdown e = gl_energy(psi, A, model, H);
  const Field2D phi = phi_view(psi, u);
  const Geometry G(m);

  double kin = 0.0;
  auto link = [&](std::size_t a, std::size_t b, double theta, double w) {
    const cplx z = phi.psi[b] * cplx(std::cos(theta), -std::sin(theta));
    kin += w * u[m.ring_of(a)] * u[m.ring_of(b)] * std::norm(z - phi.psi[a]);
  };
  for (std::size_t i = 0; i + 1 < m.n_r(); ++i)
    for (std::size_t j = 0; j < m.n_theta(); ++j)
      link(m.node(i, j), m.node(i + 1, j), A.radial[m.radial_edge(i, j)], G.wr[i]);
  for (std::size_t i = 1; i < m.n_r(); ++i)
    for (std::size_t j = 0; j < m.n_theta(); ++j)
      link(m.node(i, j), m.node(i, j + 1), A.angular[m.angular_edge(i, j)], G.wa[i]);
  const double ie2 = 1.0 / (model.epsilon() * model.epsilon());
  double pot = 0.0;
  for (std::size_t n = 0; n < m.num_nodes(); ++n) {
    const std::size_t ring = m.ring_of(n);
    const double u2 = u[ring] * u[ring];
    const double g = 1.0 - std::norm(phi.psi[n]);
    pot += 0.5 * ie2 * (G.vin[ring] + G.vout[ring]) * u2 * u2 * g * g;
  }
  e.split_c0 = energy_c0(u).value;
  e.split_f = kin + pot + e.field;
  if (std::abs(e.total - e.split_c0 - e.split_f) > 1e-10 * (1.0 + std::abs(e.total)))
    throw PostconditionError("split_energy: G != C0 + F beyond 1e-10");
  return e;
}

std::pair<Field2D, Gauge2D> meissner_configuration(const RadialProfile& u, const LondonSolution& sol, double H,
                                                   MeshPtr mesh) {
  const DiscMesh& m = *mesh;
  if (!m.radial().same_nodes(u.grid) || !sol.grid().same_nodes(u.grid))
    throw MeshMismatchError("meissner_configuration: grids differ");
  Field2D psi = zero_field(mesh);
  Gauge2D A = zero_gauge(mesh);
  for (std::size_t n = 0; n < m.num_nodes(); ++n) psi.psi[n] = u[m.ring_of(n)];
  const auto flux = ring_flux(sol);
  for (std::size_t i = 1; i < m.n_r(); ++i) {
    const double theta = H * flux[i] / static_cast<double>(m.n_theta());
    for (std::size_t j = 0; j < m.n_theta(); ++j) A.angular[m.angular_edge(i, j)] = theta;
  }
  return {std::move(psi), std::move(A)};
}

void gauge_transform(Field2D& psi, Gauge2D& A, std::span<const double> chi) {
  check_pair(psi, A);
  const DiscMesh& m = *psi.mesh;
  if (chi.size() != m.num_nodes()) throw MeshMismatchError("gauge_transform: chi size");
  for (std::size_t n = 0; n < m.num_nodes(); ++n) psi.psi[n] *= cplx(std::cos(chi[n]), std::sin(chi[n]));
  for (std::size_t i = 0; i + 1 < m.n_r(); ++i)
    for (std::size_t j = 0; j < m.n_theta(); ++j)
      A.radial[m.radial_edge(i, j)] += chi[m.node(i + 1, j)] - chi[m.node(i, j)];
  for (std::size_t i = 1; i < m.n_r(); ++i)
    for (std::size_t j = 0; j < m.n_theta(); ++j)
      A.angular[m.angular_edge(i, j)] += chi[m.node(i, j + 1)] - chi[m.node(i, j)];
}

double coulomb_project(Field2D& psi, Gauge2D& A) {
  const auto div = divergence(A);
  const PolarSolver solver = laplacian_solver(*A.mesh);
  const auto chi = solver.solve(div);
  gauge_transform(psi, A, chi);
  return coulomb_residual(A);
}

std::vector<double> vorticity(const Field2D& psi, const Gauge2D& A) {
  check_pair(psi, A);
  const DiscMesh& m = *psi.mesh;
  auto current = [&](std::size_t a, std::size_t b, double theta) {
    const cplx z = std::conj(psi.psi[a]) * psi.psi[b] * cplx(std::cos(theta), -std::sin(theta));
    return std::abs(psi.psi[a]) * std::abs(psi.psi[b]) * std::arg(z);
  };
  std::vector<double> mu(m.num_cells());
  const auto circ = cell_circulation(A);
  for (std::size_t i = 0; i + 1 < m.n_r(); ++i) {
    for (std::size_t j = 0; j < m.n_theta(); ++j) {
      double s = current(m.node(i, j), m.node(i + 1, j), A.radial[m.radial_edge(i, j)]) +
                 current(m.node(i + 1, j), m.node(i + 1, j + 1), A.angular[m.angular_edge(i + 1, j)]) -
                 current(m.node(i, j + 1), m.node(i + 1, j + 1), A.radial[m.radial_edge(i, j + 1)]);
      if (i > 0) s -= current(m.node(i, j), m.node(i, j + 1), A.angular[m.angular_edge(i, j)]);
      const std::size_t c = m.cell(i, j);
      mu[c] = (s + circ[c]) / m.cell_area(i);
    }
  }
  return mu;
}

double vorticity_integral(const Field2D& psi, const Gauge2D& A) {
  const DiscMesh& m = *psi.mesh;
  const auto mu = vorticity(psi, A);
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < m.n_r(); ++i)
    for (std::size_t j = 0; j < m.n_theta(); ++j) s += mu[m.cell(i, j)] * m.cell_area(i);
  return s;
}

std::pair<Field2D, Gauge2D> random_smooth_state(MeshPtr mesh, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  auto modes = [&] {
    std::vector<std::array<double, 4>> c(6);
    for (auto& x : c) x = {U(rng), 3.0 * U(rng), 3.0 * U(rng), kPi * U(rng)};
    return c;
  };
  const auto amp = modes(), phase = modes(), ax = modes(), ay = modes();
  const DiscMesh& m = *mesh;
  Field2D psi = zero_field(mesh);
  Gauge2D A = zero_gauge(mesh);
  for (std::size_t n = 0; n < m.num_nodes(); ++n) {
    const double x = m.x(n), y = m.y(n);
    const double r = 0.6 + 0.3 * smooth_noise(amp, x, y);
    const double t = 2.0 * smooth_noise(phase, x, y);
    psi.psi[n] = std::polar(r, t);
  }
  auto set_link = [&](std::size_t a, std::size_t b, double& theta) {
    const double mx = 0.5 * (m.x(a) + m.x(b)), my = 0.5 * (m.y(a) + m.y(b));
    theta = 0.5 * (smooth_noise(ax, mx, my) * (m.x(b) - m.x(a)) + smooth_noise(ay, mx, my) * (m.y(b) - m.y(a)));
  };
  for (std::size_t i = 0; i + 1 < m.n_r(); ++i)
    for (std::size_t j = 0; j < m.n_theta(); ++j)
      set_link(m.node(i, j), m.node(i + 1, j), A.radial[m.radial_edge(i, j)]);
  for (std::size_t i = 1; i < m.n_r(); ++i)
    for (std::size_t j = 0; j < m.n_theta(); ++j)
      set_link(m.node(i, j), m.node(i, j + 1), A.angular[m.angular_edge(i, j)]);
  return {std::move(psi), std::move(A)};
}

void imprint_vortices(Field2D& psi, std::span<const VortexSeed> seeds, double epsilon) {
  const DiscMesh& m = *psi.mesh;
  const double core = 2.0 * epsilon * epsilon;
  for (std::size_t n = 0; n < m.num_nodes(); ++n) {
    const cplx z(m.x(n), m.y(n));
    cplx f = 1.0;
    for (const auto& s : seeds) {
      const cplx d = z - cplx(s.x, s.y);
      cplx v = d / std::sqrt(std::norm(d) + core);
      if (s.degree < 0) v = std::conj(v);
      for (int k = 0; k < std::abs(s.degree); ++k) f *= v;
    }
    psi.psi[n] *= f;
  }
}

// ---------------------------------------------------------------------------

namespace {

struct Packing {
  std::size_t nn, nrad, nang;
  std::size_t size() const { return 2 * nn + nrad + nang; }
  void pack(const Field2D& psi, const Gauge2D& A, std::vector<double>& x) const {
    x.resize(size());
    for (std::size_t n = 0; n < nn; ++n) {
      x[2 * n] = psi.psi[n].real();
      x[2 * n + 1] = psi.psi[n].imag();
    }
    std::copy(A.radial.begin(), A.radial.end(), x.begin() + 2 * nn);
    std::copy(A.angular.begin(), A.angular.end(), x.begin() + 2 * nn + nrad);
  }
  void unpack(std::span<const double> x, Field2D& psi, Gauge2D& A) const {
    for (std::size_t n = 0; n < nn; ++n) psi.psi[n] = {x[2 * n], x[2 * n + 1]};
    std::copy(x.begin() + 2 * nn, x.begin() + 2 * nn + nrad, A.radial.begin());
    std::copy(x.begin() + 2 * nn + nrad, x.end(), A.angular.begin());
  }
};

std::vector<double> inverse_diagonal(const DiscMesh& m, const Geometry& G, const PinningModel& model,
                                     const Field2D& psi) {
  const std::size_t nn = m.num_nodes();
  std::vector<double> hp(nn, 0.0), hr(m.num_radial_edges(), 0.0), ha(m.num_angular_edges(), 0.0);
  for (std::size_t i = 0; i + 1 < m.n_r(); ++i) {
    for (std::size_t j = 0; j < m.n_theta(); ++j) {
      const std::size_t a = m.node(i, j), b = m.node(i + 1, j), e = m.radial_edge(i, j);
      hp[a] += 2.0 * G.wr[i];
      hp[b] += 2.0 * G.wr[i];
      hr[e] += 2.0 * G.wr[i] * std::abs(psi.psi[a]) * std::abs(psi.psi[b]);
      const double c = 2.0 / G.area[i];
      hr[e] += c;
      hr[m.radial_edge(i, j + 1)] += c;
      ha[m.angular_edge(i + 1, j)] += c;
      if (i > 0) ha[m.angular_edge(i, j)] += c;
    }
  }
  for (std::size_t i = 1; i < m.n_r(); ++i) {
    for (std::size_t j = 0; j < m.n_theta(); ++j) {
      const std::size_t a = m.node(i, j), b = m.node(i, j + 1), e = m.angular_edge(i, j);
      hp[a] += 2.0 * G.wa[i];
      hp[b] += 2.0 * G.wa[i];
      ha[e] += 2.0 * G.wa[i] * std::abs(psi.psi[a]) * std::abs(psi.psi[b]);
    }
  }
  const double ie2 = 1.0 / (model.epsilon() * model.epsilon());
  for (std::size_t n = 0; n < nn; ++n) {
    const std::size_t ring = m.ring_of(n);
    const double s = std::norm(psi.psi[n]);
    hp[n] += 2.0 * ie2 * (G.vin[ring] * std::max(std::abs(3.0 * s - 1.0), 0.1) +
                          G.vout[ring] * std::max(std::abs(3.0 * s - model.a()), 0.1 * model.a()));
  }
  std::vector<double> inv;
  inv.reserve(2 * nn + hr.size() + ha.size());
  for (std::size_t n = 0; n < nn; ++n) {
    inv.push_back(1.0 / hp[n]);
    inv.push_back(1.0 / hp[n]);
  }
  for (double v : hr) inv.push_back(1.0 / v);
  for (double v : ha) inv.push_back(1.0 / v);
  return inv;
}

}  // namespace

MinimizeResult minimize(const PinningModel& model, double H, Field2D psi, Gauge2D A, const MinimizeOptions& opts) {
  check_pair(psi, A);
  check_model(*psi.mesh, model);
  if (!(H >= 0.0)) throw ConfigError("minimize: H must be nonnegative");
  const DiscMesh& m = *psi.mesh;
  const Geometry G(m);
  const Packing P{m.num_nodes(), m.num_radial_edges(), m.num_angular_edges()};
  const std::size_t nn = P.nn;

  Objective f = [&](std::span<const double> x, std::span<double> g) {
    const auto* p = reinterpret_cast<const cplx*>(x.data());
    auto* gp = reinterpret_cast<cplx*>(g.data());
    return evaluate(m, G, model, H, p, x.data() + 2 * nn, x.data() + 2 * nn + P.nrad, nullptr, gp,
                    g.data() + 2 * nn, g.data() + 2 * nn + P.nrad);
  };

  MinimizeResult out;
  if (opts.project) coulomb_project(psi, A);
  std::vector<double> x;
  P.pack(psi, A, x);
  std::vector<double> scratch(x.size());
  double E = f(x, scratch);
  int total = 0;
  while (total < opts.max_iterations) {
    const auto inv = inverse_diagonal(m, G, model, psi);
    LbfgsOptions lo;
    lo.max_iterations = std::min(opts.block, opts.max_iterations - total);
    lo.memory = opts.memory;
    const LbfgsResult r = lbfgs(f, x, inv, lo);
    total += r.iterations;
    out.gradient_norm = r.gradient_norm;
    P.unpack(x, psi, A);
    if (opts.project) {
      coulomb_project(psi, A);
      P.pack(psi, A, x);
    }
    const double En = f(x, scratch);
    // a gauge transform is exact up to rounding
    if (En > E + 1e-12 * std::abs(E)) out.monotone = false;
    const double drop = E - En;
    E = std::min(E, En);
    if (drop <= opts.relative_tolerance * std::abs(En) || r.stalled || r.iterations == 0) {
      out.converged = true;
      break;
    }
  }
  out.iterations = total;
  out.energy = gl_energy(psi, A, model, H);
  double mx = 0.0;
  for (const cplx& z : psi.psi) mx = std::max(mx, std::abs(z));
  out.max_modulus = mx;
  out.psi = std::move(psi);
  out.A = std::move(A);
  return out;
}

// ---------------------------------------------------------------------------

Problem make_problem(const PinningModel& model, std::size_t n_r, std::size_t n_theta) {
  MeshPtr mesh = make_mesh(model, n_r, n_theta);
  RadialProfile u = solve_radial_minimizer(model, mesh->radial());
  LondonSolution sol = solve_london(u);
  return Problem{model, std::move(mesh), std::move(u), std::move(sol)};
}

int default_vortex_count(const PinningModel& model) {
  return std::max(1, static_cast<int>(std::floor(std::log(model.log_inv_eps()))));
}

std::vector<VortexSeed> attractor_seeds(const Problem& p, int n, double angle) {
  std::vector<VortexSeed> seeds;
  if (n <= 0) return seeds;
  double rad = p.london.attractor.radius;
  if (p.london.attractor.kind == Attractor::Kind::CenterPoint) rad = n == 1 ? 0.0 : 0.1;
  for (int k = 0; k < n; ++k) {
    const double t = angle + 2.0 * kPi * k / n;
    seeds.push_back({rad * std::cos(t), rad * std::sin(t), 1});
  }
  return seeds;
}

PolicyResult minimize_with_policy(const Problem& p, double H, const PolicyOptions& opts, const MinimizeResult* warm) {
  std::vector<int> counts = opts.seed_counts;
  if (counts.empty()) counts.push_back(default_vortex_count(p.model));

  PolicyResult out;
  bool have = false;
  auto consider = [&](std::string label, MinimizeResult r) {
    out.tried.emplace_back(label, r.energy.total);
    if (!have || r.energy.total < out.best.energy.total) {
      out.best = std::move(r);
      out.init = std::move(label);
      have = true;
    }
  };
  auto [psi0, A0] = meissner_configuration(p.u, p.london, H, p.mesh);
  consider("meissner", minimize(p.model, H, psi0, A0, opts.minimize));
  for (int n : counts) {
    if (n <= 0) continue;
    Field2D psi = psi0;
    const auto seeds = attractor_seeds(p, n, kPi / 7.0);
    imprint_vortices(psi, seeds, p.model.epsilon());
    consider("seeded:" + std::to_string(n), minimize(p.model, H, std::move(psi), A0, opts.minimize));
  }
  if (warm) consider("warm", minimize(p.model, H, warm->psi, warm->A, opts.minimize));
  return out;
}

}  // namespace glpin
