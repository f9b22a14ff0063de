#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "glpin/gl2d.hpp"
#include "glpin/polar_solver.hpp"

namespace glpin {

struct Site {
  double x = 0.0, y = 0.0;
};

/// G_eps(., y) for -div(u^-2 grad G) + G = delta_y in the disc, G = 0 on the
/// boundary, with the delta carried as unit mass on the node nearest y.
struct GreenKernel {
  Site source;              // position of the source node
  std::size_t source_node = 0;
  std::vector<double> values;
  /// G + (u^2(x)/2 pi) ln |x - y|; on the source node, the mean over its
  /// neighbours.
  std::vector<double> regular_part;
};

/// Assembled weighted operator K on a mesh: radial edges w/(u_i u_{i+1}),
/// angular edges w/u_i^2, mass the control volume, Dirichlet at r = 1.
class GreenOperator {
 public:
  GreenOperator(const RadialProfile& u, MeshPtr mesh);

  const DiscMesh& mesh() const { return *mesh_; }
  MeshPtr mesh_ptr() const { return mesh_; }
  const RadialProfile& profile() const { return u_; }

  /// Throws DomainError if y lies outside the disc or within two cells of
  /// the boundary.
  GreenKernel kernel(double x, double y) const;
  GreenKernel kernel_at_node(std::size_t node) const;
  /// K^{-1} f for nodal loads f (integrated over control volumes).
  std::vector<double> solve(std::span<const double> f) const;
  /// g^T K g = sum_e kappa_e (g_k - g_j)^2 + sum_n V_n g_n^2.
  double quadratic_form(std::span<const double> g) const;

 private:
  RadialProfile u_;
  MeshPtr mesh_;
  std::vector<double> kr_, ka_, mass_;
  PolarSolver solver_;
};

GreenKernel solve_green(const RadialProfile& u, double x, double y, MeshPtr mesh);

/// Least-squares slope of G against ln(1/|x - y|) over nodes with
/// r_min < |x - y| < r_max.
double green_log_slope(const GreenKernel& g, const DiscMesh& mesh, double r_min, double r_max);

struct SiteSelection {
  std::vector<Site> sites;
  double r_eps = 0.0;
  double offset = 0.0;
  double max_regular = 0.0;  // max_i |v(a_i, a_i)| at the chosen offset
};

/// R + ln|ln eps| / |ln eps|
double test_circle_radius(const PinningModel& model);

/// n equally spaced points on r = r_eps; the angular offset is the best of
/// 8 candidates in [0, 2 pi/n) for max_i |v(a_i, a_i)|. Throws
/// TooManySitesError if balls of radius 2 eps around the sites overlap or
/// leave the disc.
SiteSelection select_sites(const GreenOperator& op, int n);

struct TestConfiguration {
  SiteSelection sites;
  std::vector<double> load;        // integral of mu over each control volume
  std::vector<double> mu_density;  // load / volume
  std::vector<double> h_prime;
  std::vector<double> rho;
};

/// mu = 2/eps^2 on the site balls of radius eps, integrated by 8 x 8
/// subsampling of each control volume; h' = K^{-1} load; rho = 0 on the
/// eps-balls, |x - a_i|/eps - 1 on the annuli, 1 elsewhere.
TestConfiguration build_test_configuration(const GreenOperator& op, int n);

struct TestEnergy {
  double meissner = 0.0;   // H^2 J0
  double kinetic_rho = 0.0;  // int u^2 |grad rho|^2
  double current = 0.0;    // int rho^2 |grad h'|^2 / u^2
  double field = 0.0;      // int h'^2
  double potential = 0.0;  // int u^4 (1 - rho^2)^2 / (2 eps^2)
  double cross = 0.0;      // 2H int (h_eps - 1) mu(phi, A')
  double amplitude = 0.0;  // H^2 int (rho^2 - 1) |grad h_eps|^2 / u^2
  double total = 0.0;
  double dirichlet = 0.0;        // int (|grad h'|^2/u^2 + h'^2)
  double green_double = 0.0;     // sum over load pairs of G
  double identity_error = 0.0;   // |dirichlet - green_double| / green_double
};

/// Reduced energy F of the test configuration through the decomposition
/// around the Meissner state; the phase enters only through
/// grad phi - A' = -u^-2 grad^perp h'.
TestEnergy test_config_energy(const GreenOperator& op, const TestConfiguration& cfg, const LondonSolution& sol,
                              double H);

/// sum_m load_m G(x, node_m), one kernel per probe.
double green_representation(const GreenOperator& op, const TestConfiguration& cfg, std::size_t probe_node);

// ---------------------------------------------------------------------------

struct RenormalizedValue {
  double value = 0.0;
  double interaction = 0.0;  // -2 pi sum_{i != j} ln |x_i - x_j|
  double confinement = 0.0;  // 2 pi xi2 sum |x_i|^2
  std::vector<double> gradient;  // (d/dx_1, d/dy_1, d/dx_2, ...)
};

/// Throws SingularInputError on coincident points.
RenormalizedValue renormalized_energy(std::span<const Site> points, double xi2);

struct RenormalizedMinimum {
  std::vector<Site> points;
  double value = 0.0;
  double gradient_norm = 0.0;
};

/// L-BFGS from `restarts` random starts; the best configuration is rotated so
/// that the point farthest from the origin lies on the positive x-axis.
RenormalizedMinimum minimize_renormalized(int n, double xi2, int restarts = 8, std::uint64_t seed = 1);

}  // namespace glpin
