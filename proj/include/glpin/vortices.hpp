#pragma once

#include <string>
#include <vector>

#include "glpin/gl2d.hpp"

namespace glpin {

struct VortexBall {
  double x = 0.0, y = 0.0;
  double radius = 0.0;
  int degree = 0;
  bool touches_boundary = false;  // degree forced to 0
};

/// Value of a nodal field at (x, y), bilinear in (r, theta).
cplx interpolate(const Field2D& f, double x, double y);

/// Winding number of f/|f| on a circle, from `samples` principal-branch phase
/// increments. Throws UndefinedDegreeError if |f| < 1e-3 on the circle or
/// the sum is more than 0.2 away from an integer.
int winding_degree(const Field2D& f, double cx, double cy, double radius, int samples = 64);

/// Connected components of {|phi| < threshold}, enclosed in bounding circles
/// inflated by two cells, overlapping circles merged. Interior balls carry
/// the winding degree of phi on their boundary circle.
std::vector<VortexBall> detect_vortices(const Field2D& phi, double threshold = 0.5);

struct DegreeStats {
  int d_plus = 0, d_minus = 0, d_total = 0;
  int d_near_interface = 0;  // sum |d_i| over balls with ||a_i| - R| <= tol
};
/// tol <= 0 selects |ln eps|^{-1/4} for the given eps.
DegreeStats degree_statistics(const std::vector<VortexBall>& balls, double R, double tol);

struct SweepPoint {
  double H = 0.0;
  double energy = 0.0;
  DegreeStats stats;
  std::string init;
  bool converged = false;
};

struct CriticalFieldEstimate {
  double H_lo = 0.0, H_hi = 0.0;
  double k_eps_ref = 0.0;
  double ratio = 0.0;  // 0.5 (H_lo + H_hi) / (k_eps |ln eps|)
  std::vector<SweepPoint> table;
  std::vector<MinimizeResult> minimizers;  // best state per H, same order as table
};

/// Minimizes at each H (policy inits plus a warm start from the previous H)
/// and brackets the first field with D_total >= 1. Throws OutOfRangeError if
/// no transition occurs on the grid.
CriticalFieldEstimate critical_field_sweep(const Problem& p, const std::vector<double>& H_grid,
                                           const PolicyOptions& opts = {});

/// eps || n.(grad - iA) psi + (gamma/eps) psi ||_{L^2(r = R)}, the normal
/// derivative taken one-sided from the inner disc. Throws NotApplicableError
/// if phi = psi/u carries vortices.
double robin_residual(const Field2D& psi, const Gauge2D& A, const RadialProfile& u, double gamma);

/// The same quantity for the radial profile: eps |u'(R-) + gamma u(R)/eps| sqrt(2 pi R).
double robin_residual_radial(const RadialProfile& u, double gamma);

}  // namespace glpin
