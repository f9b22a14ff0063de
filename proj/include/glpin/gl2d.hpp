#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <span>
#include <vector>

#include "glpin/london.hpp"
#include "glpin/model.hpp"
#include "glpin/profile1d.hpp"

namespace glpin {

using MeshPtr = std::shared_ptr<const DiscMesh>;

MeshPtr make_mesh(const PinningModel& model, std::size_t n_r, std::size_t n_theta);

/// Order parameter, one complex value per mesh node.
struct Field2D {
  MeshPtr mesh;
  std::vector<cplx> psi;
};

/// Magnetic potential stored as link phases theta_e ~ int_e A . dl, oriented
/// outward on radial edges and counter-clockwise on angular edges.
struct Gauge2D {
  MeshPtr mesh;
  std::vector<double> radial;   // indexed by DiscMesh::radial_edge
  std::vector<double> angular;  // indexed by DiscMesh::angular_edge
};

Field2D zero_field(MeshPtr mesh);
Gauge2D zero_gauge(MeshPtr mesh);

/// Circulation of the links around every cell.
std::vector<double> cell_circulation(const Gauge2D& A);
/// curl A per cell (circulation / area).
std::vector<double> h_field(const Gauge2D& A);

/// Nodal components (A_r, A_theta) reconstructed from the links. A_r is 0 on
/// the outer ring, where the discrete gauge carries no normal flux.
struct NodalPotential {
  std::vector<double> a_r, a_theta;
};
NodalPotential nodal_potential(const Gauge2D& A);

/// Discrete divergence: net link flux sum_e w_e theta_e out of each node's
/// control volume.
std::vector<double> divergence(const Gauge2D& A);
/// max_n |div_n| / |V_n|
double coulomb_residual(const Gauge2D& A);
/// Largest normal flux density through the outer boundary implied by the
/// divergence on the boundary ring.
double boundary_normal_residual(const Gauge2D& A);

struct EnergyBreakdown {
  double kinetic = 0.0, potential = 0.0, field = 0.0, total = 0.0;
  double split_c0 = 0.0, split_f = 0.0;  // filled by split_energy only
};

/// Discrete G_{eps,H}: sum_e w_e |psi_k e^{-i theta_e} - psi_j|^2
/// + sum_n [V_in (1-|psi|^2)^2 + V_out (a-|psi|^2)^2]/(2 eps^2)
/// + sum_c (circ_c - H area_c)^2 / area_c.
EnergyBreakdown gl_energy(const Field2D& psi, const Gauge2D& A, const PinningModel& model, double H);

/// Energy with its gradient: d_psi holds dE/dRe + i dE/dIm per node.
struct EnergyGradient {
  EnergyBreakdown energy;
  std::vector<cplx> d_psi;
  std::vector<double> d_radial, d_angular;
};
EnergyGradient gl_energy_gradient(const Field2D& psi, const Gauge2D& A, const PinningModel& model, double H);

/// phi = psi / u_eps nodewise.
Field2D phi_view(const Field2D& psi, const RadialProfile& u);

/// G = C0 + F with F(phi, A) = sum_e w_e u_j u_k |phi_k e^{-i theta} - phi_j|^2
/// + sum_n V u^4 (1 - |phi|^2)^2 / (2 eps^2) + field term. Throws
/// PostconditionError if the identity fails beyond 1e-10 (1 + |G|).
EnergyBreakdown split_energy(const Field2D& psi, const Gauge2D& A, const RadialProfile& u, double H);

/// psi = u, radial links 0, angular links carrying the flux of H h_eps.
std::pair<Field2D, Gauge2D> meissner_configuration(const RadialProfile& u, const LondonSolution& sol, double H,
                                                   MeshPtr mesh);

/// psi -> psi e^{i chi}, theta_e -> theta_e + chi_k - chi_j.
void gauge_transform(Field2D& psi, Gauge2D& A, std::span<const double> chi);

/// Gauge transform to the discrete Coulomb gauge (div A = 0 at every node);
/// returns the remaining coulomb_residual.
double coulomb_project(Field2D& psi, Gauge2D& A);

/// Vorticity per cell: (circulation of the gauge-invariant current
/// |psi_j||psi_k| arg(conj(psi_j) psi_k e^{-i theta}) + circulation of A) / area.
std::vector<double> vorticity(const Field2D& psi, const Gauge2D& A);
/// sum_c mu_c area_c
double vorticity_integral(const Field2D& psi, const Gauge2D& A);

/// Smooth vortex-free random state: |psi| in [0.3, 0.9], smooth phase and
/// smooth random links.
std::pair<Field2D, Gauge2D> random_smooth_state(MeshPtr mesh, std::uint64_t seed);

struct VortexSeed {
  double x = 0.0, y = 0.0;
  int degree = 1;
};
/// Multiplies psi by prod_i ((z - a_i)/sqrt(|z - a_i|^2 + 2 eps^2))^{d_i}.
void imprint_vortices(Field2D& psi, std::span<const VortexSeed> seeds, double epsilon);

struct MinimizeOptions {
  int max_iterations = 20000;
  int block = 100;
  double relative_tolerance = 1e-10;  // per-block relative energy decrease
  int memory = 8;
  bool project = true;
};

struct MinimizeResult {
  Field2D psi;
  Gauge2D A;
  EnergyBreakdown energy;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
  double max_modulus = 0.0;
  bool monotone = true;  // energy never increased across accepted steps
};

/// L-BFGS descent on the link-variable energy with Jacobi scaling, in blocks;
/// the gauge is projected to Coulomb after every block.
MinimizeResult minimize(const PinningModel& model, double H, Field2D psi, Gauge2D A,
                        const MinimizeOptions& opts = {});

/// Everything a 2-D run at fixed (a, R, eps) needs: mesh, radial profile and
/// London solution on the mesh's radial grid.
struct Problem {
  PinningModel model;
  MeshPtr mesh;
  RadialProfile u;
  LondonSolution london;
  /// k_eps |ln eps|
  double field_scale() const { return london.k_eps * model.log_inv_eps(); }
};
Problem make_problem(const PinningModel& model, std::size_t n_r, std::size_t n_theta);

/// n(eps) = max(1, floor(ln |ln eps|)).
int default_vortex_count(const PinningModel& model);

/// n equally spaced seeds on the attractor circle (on the centre, or a
/// circle of radius 0.1 when n > 1, for a CenterPoint attractor).
std::vector<VortexSeed> attractor_seeds(const Problem& p, int n, double angle = 0.0);

struct PolicyOptions {
  MinimizeOptions minimize;
  std::vector<int> seed_counts;  // empty: {default_vortex_count}
};

struct PolicyResult {
  MinimizeResult best;
  std::string init;  // "meissner", "seeded:<n>" or "warm"
  std::vector<std::pair<std::string, double>> tried;  // init label -> energy
};

/// Runs the Meissner init and every seeded init (plus an optional warm start)
/// and keeps the lowest energy.
PolicyResult minimize_with_policy(const Problem& p, double H, const PolicyOptions& opts = {},
                                  const MinimizeResult* warm = nullptr);

}  // namespace glpin
