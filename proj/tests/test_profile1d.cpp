#include <chrono>
#include <cmath>

#include "doctest.h"
#include "glpin/errors.hpp"
#include "glpin/profile1d.hpp"

using namespace glpin;

namespace {
// First integral U'^2 = (p - U^2)^2 / 2 on both half-lines with C^1 matching
// gives U(0)^2 = (1 + a)/2 and gamma = (1 - a) / (2 sqrt(1 + a)).
double oracle_u0(double a) { return std::sqrt(0.5 * (1.0 + a)); }
double oracle_gamma(double a) { return (1.0 - a) / (2.0 * std::sqrt(1.0 + a)); }
}  // namespace

TEST_CASE("canonical profile matches the first-integral oracle") {
  for (double a : {0.04, 0.1, 0.25, 0.5, 0.81, 1.2, 2.0, 4.0, 9.0}) {
    CAPTURE(a);
    const auto U = solve_canonical_profile(a);
    CHECK(U.matching_residual() < 1e-10);
    CHECK(U.interface_value() == doctest::Approx(oracle_u0(a)).epsilon(1e-9));
    CHECK(degennes_gamma(U) == doctest::Approx(oracle_gamma(a)).epsilon(1e-8));
    // U' = -(p - U^2)/sqrt 2 sign-adjusted, checked at interior points
    for (double x : {-3.0, -0.7, 0.4, 2.5}) {
      const double p = x < 0 ? 1.0 : a, u = U(x);
      CHECK(std::abs(U.derivative(x)) == doctest::Approx(std::abs(p - u * u) / std::sqrt(2.0)).epsilon(1e-6));
    }
  }
  CHECK(oracle_gamma(0.25) == doctest::Approx(0.335410).epsilon(1e-6));
  CHECK_THROWS_AS(solve_canonical_profile(1.0), DegenerateModelError);
}

TEST_CASE("canonical profile far field") {
  for (double a : {0.25, 4.0, 9.0}) {
    CAPTURE(a);
    const auto U = solve_canonical_profile(a);
    CHECK(std::abs(U(-20.0) - 1.0) < 1e-6);
    CHECK(std::abs(U(20.0) - std::sqrt(a)) < 1e-6);
  }
  // tail |U - sqrt a| ~ e^{-sqrt(2a) x}: slow for small a
  const auto U = solve_canonical_profile(0.1);
  const double r = std::log(U.deviation(12.0) / U.deviation(16.0)) / 4.0;
  CHECK(r == doctest::Approx(std::sqrt(0.2)).epsilon(1e-3));
}

TEST_CASE("closed-form audit reports disagreement") {
  const auto U = solve_canonical_profile(0.25);
  const auto audit = audit_closed_form(U);
  CHECK_FALSE(audit.report.empty());
  CHECK(std::isfinite(audit.max_deviation));
}

TEST_CASE("radial minimizer: bounds, monotonicity, residual") {
  for (double a : {0.25, 4.0}) {
    CAPTURE(a);
    const PinningModel m(a, 0.5, 0.05);
    const auto u = solve_radial_minimizer(m, graded_radial_grid(m, 512));
    CHECK(u.residual < 1e-8);
    CHECK(within_band(u));
    CHECK(is_monotone(u));
    const auto res = radial_residual(m, u.grid, u.values);
    double mx = 0.0;
    for (double v : res) mx = std::max(mx, std::abs(v));
    CHECK(mx < 1e-8);
  }
}

TEST_CASE("radial minimizer beats the canonical profile") {
  const PinningModel m(0.25, 0.5, 0.05);
  const auto g = graded_radial_grid(m, 192);
  const auto u = solve_radial_minimizer(m, g);
  const auto U = solve_canonical_profile(0.25);
  std::vector<double> trial(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) trial[i] = U((g[i] - 0.5) / 0.05);
  CHECK(energy_c0(u).value < zero_field_energy(m, g, trial));
  // frozen from this solver on the 192-node graded grid
  CHECK(energy_c0(u).value == doctest::Approx(8.1955010107).epsilon(1e-8));
}

TEST_CASE("profile converges to the canonical profile") {
  const auto U = solve_canonical_profile(0.25);
  double prev = 1e300;
  for (double eps : {0.04, 0.02, 0.01}) {
    const PinningModel m(0.25, 0.5, eps);
    const auto u = solve_radial_minimizer(m, graded_radial_grid(m, 1024));
    const double d = profile_deviation(u, U);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("interface decay rates approach sqrt 2 and sqrt(2a)") {
  const PinningModel m(4.0, 0.5, 0.02);
  const auto u = solve_radial_minimizer(m, graded_radial_grid(m, 1024));
  CHECK(interface_decay_rate(u, DecaySide::Inner) == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));
  CHECK(interface_decay_rate(u, DecaySide::Outer) == doctest::Approx(std::sqrt(8.0)).epsilon(0.05));
}

TEST_CASE("Robin ratio shrinks with epsilon") {
  const double gamma = oracle_gamma(0.25);
  double prev = 1e300;
  for (double eps : {0.05, 0.025, 0.0125}) {
    const PinningModel m(0.25, 0.5, eps);
    const auto u = solve_radial_minimizer(m, graded_radial_grid(m, 1024));
    const double r = std::abs(robin_ratio(u, gamma));
    CHECK(r < prev);
    prev = r;
  }
}
