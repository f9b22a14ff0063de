#pragma once

#include <string>
#include <vector>

#include "glpin/model.hpp"

namespace glpin {

/// Interface profile U on the real line: -U'' = (1 - U^2) U for x < 0,
/// -U'' = (a - U^2) U for x > 0, C^1 at 0, U -> 1 at -inf and sqrt(a) at +inf.
///
/// Built by two-sided shooting: each half-line solution is started on the
/// heteroclinic tail at |x| = L and integrated towards 0 with RK4; the two
/// tail amplitudes are fitted so that U and U' match at the origin.
class CanonicalProfile {
 public:
  double a() const noexcept { return a_; }
  double operator()(double x) const;
  double derivative(double x) const;
  /// U(x) - 1 for x <= 0 and U(x) - sqrt(a) for x > 0, without cancellation.
  double deviation(double x) const;

  /// U(0) and the one-sided slopes at the interface.
  double interface_value() const noexcept { return u0_; }
  double slope_left() const noexcept { return du_left_; }
  double slope_right() const noexcept { return du_right_; }
  double value_jump() const noexcept { return value_jump_; }
  /// max(|U(0-) - U(0+)|, |U'(0-) - U'(0+)|) of the converged shot.
  double matching_residual() const noexcept;
  int shooting_iterations() const noexcept { return iterations_; }

  /// tanh-form constants of the computed solution:
  /// U = (b1 e^{-sqrt2 x} - 1)/(b1 e^{-sqrt2 x} + 1) on x < 0 and
  /// U = sqrt(a) (b2 e^{sqrt(2a) x} - 1)/(b2 e^{sqrt(2a) x} + 1) on x > 0.
  double beta1() const noexcept { return beta1_; }
  double beta2() const noexcept { return beta2_; }
  /// sqrt(-beta2/beta1), the auxiliary constant tying the two sides together.
  double alpha() const noexcept { return alpha_; }
  double gamma() const noexcept;

  double half_width() const noexcept { return L_; }

 private:
  friend CanonicalProfile solve_canonical_profile(double a);

  double a_ = 0.0;
  double L_ = 0.0;
  double h_ = 0.0;
  // deviation samples on [-L, 0] and [0, L]
  std::vector<double> left_u_, left_du_, right_u_, right_du_;
  double u0_ = 0, du_left_ = 0, du_right_ = 0, value_jump_ = 0;
  double beta1_ = 0, beta2_ = 0, alpha_ = 0;
  int iterations_ = 0;
};

CanonicalProfile solve_canonical_profile(double a);

/// gamma(a) = -U'(0)/U(0); positive for a < 1, negative for a > 1.
double degennes_gamma(const CanonicalProfile& profile);

/// Comparison of the printed closed-form constants against the shooting
/// solution. `consistent` is false whenever they disagree beyond 1e-6.
struct ClosedFormAudit {
  double alpha = 0, beta1 = 0, beta2 = 0, gamma = 0;
  double max_deviation = 0;  // sup |U_closed - U_shooting| on [-20, 20]
  double gamma_deviation = 0;
  bool sign_table_holds = false;  // beta1 > 1 & beta2 < -1 for a < 1, reversed for a > 1
  bool consistent = false;
  std::string report;
};
ClosedFormAudit audit_closed_form(const CanonicalProfile& profile);

// ---------------------------------------------------------------------------

/// Radial pinned density u_eps on a radial grid. `deviation` holds u_i minus
/// the local level (1 for r <= R, sqrt a beyond), resolved below the rounding
/// unit of u itself.
struct RadialProfile {
  RadialGrid grid;
  PinningModel model;
  std::vector<double> values;
  std::vector<double> deviation;
  double residual = 0.0;  // scaled max residual of the discrete equation
  int newton_iterations = 0;

  double operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const noexcept { return values.size(); }
};

struct EnergyScalar {
  double value = 0.0;
};

struct RadialSolveOptions {
  double tolerance = 1e-12;  // on the scaled residual
  int max_iterations = 60;
  int max_halvings = 30;
};

/// Damped Newton on the finite-volume discretisation of
/// -u'' - u'/r = eps^-2 (p - u^2) u, u'(0) = u'(1) = 0, started from
/// U((r - R)/eps). The discrete system is the exact Euler-Lagrange equation of
/// the discrete zero-field energy on the grid.
RadialProfile solve_radial_minimizer(const PinningModel& model, const RadialGrid& grid,
                                     const RadialSolveOptions& opts = {});

/// Scaled nodal residual eps^2 * (F_i / V_i) of the discrete equation.
std::vector<double> radial_residual(const PinningModel& model, const RadialGrid& grid,
                                    std::span<const double> u);

/// Discrete zero-field energy 2 pi int (u'^2 + (p - u^2)^2 / (2 eps^2)) r dr.
EnergyScalar energy_c0(const RadialProfile& u);
double zero_field_energy(const PinningModel& model, const RadialGrid& grid, std::span<const double> u);

enum class DecaySide { Inner, Outer };

/// Fitted exponential rate delta of |1 - u| over [R - 10 eps, R - 3 eps]
/// (Inner) or of |sqrt a - u| over [R + 3 eps, R + 10 eps] (Outer), in units
/// of 1/eps.
double interface_decay_rate(const RadialProfile& u, DecaySide side = DecaySide::Inner);

/// One-sided derivative of u at r = R from the inner disc.
double interface_slope_inner(const RadialProfile& u);

/// eps u'(R-)/u(R) + gamma: vanishes in the limit eps -> 0.
double robin_ratio(const RadialProfile& u, double gamma);

/// max |u_i - U((r_i - R)/eps)| over nodes with |r_i - R| <= window (all
/// nodes when window <= 0).
double profile_deviation(const RadialProfile& u, const CanonicalProfile& U, double window = 0.0);

bool is_monotone(const RadialProfile& u);

/// Strict nodewise min(1, sqrt a) < u_i < max(1, sqrt a), decided on the
/// deviations where u_i itself rounds onto a level.
bool within_band(const RadialProfile& u);

}  // namespace glpin
