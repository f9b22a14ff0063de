#pragma once

#include <vector>

#include "glpin/profile1d.hpp"

namespace glpin {

struct Attractor {
  enum class Kind { CenterPoint, Circle };
  Kind kind = Kind::CenterPoint;
  double radius = 0.0;  // R_eps for a circle, 0 for the centre
  std::size_t node = 0;  // argmax node of |xi|
};

/// Weighted London field h_eps solving -div(u^-2 grad h) + h = 0 in the disc,
/// h = 1 on the boundary, together with the pinning landscape it induces.
struct LondonSolution {
  RadialProfile u;
  std::vector<double> h;
  std::vector<double> xi;  // (h - 1)/u^2
  double lambda_eps = 0.0;  // max |xi|
  double k_eps = 0.0;       // 1/(2 lambda_eps)
  Attractor attractor;
  double residual = 0.0;
  /// Discrete flux 2 pi r h'/u^2 through face i (between nodes i and i+1).
  std::vector<double> face_flux;

  const RadialGrid& grid() const { return u.grid; }
};

/// Conservative finite volumes, face coefficient 1/(u_i u_{i+1}); h'(0) = 0,
/// h(1) = 1. Throws PostconditionError if any of 0 < h < 1 (r < 1), h
/// nondecreasing, |h'/u^2| <= 1 + 1e-8, xi <= 0 fails.
LondonSolution solve_london(const RadialProfile& u);

struct Landscape {
  std::vector<double> xi;
  double lambda_eps = 0.0;
  double k_eps = 0.0;
};
Landscape pinning_landscape(const LondonSolution& sol);

/// CenterPoint when the argmax of |xi| lies within one cell of r = 0, else
/// Circle(R_eps) with R_eps refined by a parabola through the three nodes
/// around the argmax. Ties go to the smallest radius within 1e-12.
Attractor locate_attractor(const LondonSolution& sol);

/// 2 pi int (h'^2/u^2 + (h - 1)^2) r dr in the discrete form matching the
/// solver.
EnergyScalar j0_energy(const LondonSolution& sol);

/// g = xi + lambda_eps together with its smallest value over the nodes with
/// |r - R| >= window. `region_empty` is set when no node qualifies.
struct LandscapeGap {
  std::vector<double> g;
  double window = 0.0;
  double margin = 0.0;
  bool region_empty = true;
};
/// window <= 0 selects |ln eps|^{-1/4}. Throws NotApplicableError for a
/// CenterPoint attractor.
LandscapeGap landscape_gap(const LondonSolution& sol, double window = 0.0);

/// h'/u^2 at every face.
std::vector<double> flux_ratio(const LondonSolution& sol);

/// |h'/u^2(R-) - h'/u^2(R+)| from the two one-sided flux reconstructions at
/// the interface node.
double interface_flux_jump(const LondonSolution& sol);

/// Flux of h through the disc of radius r_i, i.e. 2 pi r_i (h'/u^2)(r_i),
/// consistent with the discrete balance.
std::vector<double> ring_flux(const LondonSolution& sol);

/// Radial second derivative of xi at the origin (even quartic through the
/// first three nodes).
double xi_second_derivative_at_origin(const LondonSolution& sol);

}  // namespace glpin
