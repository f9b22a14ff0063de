#include <cmath>
#include <numbers>

#include "doctest.h"
#include "glpin/errors.hpp"
#include "glpin/profile1d.hpp"
#include "glpin/vortices.hpp"

using namespace glpin;

namespace {
const Problem& desk() {
  static const Problem p = make_problem(PinningModel(0.25, 0.5, 0.05), 192, 256);
  return p;
}

Field2D field_from(const MeshPtr& mesh, auto&& f) {
  Field2D phi = zero_field(mesh);
  for (std::size_t n = 0; n < phi.psi.size(); ++n) phi.psi[n] = f(cplx(mesh->x(n), mesh->y(n)));
  return phi;
}

// Explicit phase sum of z^d-type fields on a circle: the oracle the detector
// is compared against.
int phase_sum(auto&& f, cplx c, double r) {
  double s = 0.0;
  const int K = 1000;
  for (int k = 0; k < K; ++k) {
    const double t0 = 2 * std::numbers::pi * k / K, t1 = 2 * std::numbers::pi * (k + 1) / K;
    s += std::arg(f(c + r * std::polar(1.0, t1)) / f(c + r * std::polar(1.0, t0)));
  }
  return static_cast<int>(std::lround(s / (2 * std::numbers::pi)));
}

cplx mollified(cplx z, cplx c, int d) {
  const cplx w = z - c;
  cplx v = w / std::sqrt(std::norm(w) + 0.05 * 0.05);
  if (d < 0) v = std::conj(v);
  return std::pow(v, std::abs(d));
}
}  // namespace

TEST_CASE("winding degree of simple fields") {
  const auto& p = desk();
  const auto e1 = field_from(p.mesh, [](cplx z) { return std::polar(1.0, std::arg(z)); });
  const auto e3 = field_from(p.mesh, [](cplx z) { return std::polar(1.0, 3.0 * std::arg(z)); });
  const auto c = field_from(p.mesh, [](cplx) { return cplx(0.3, -0.2); });
  CHECK(winding_degree(e1, 0.0, 0.0, 0.9) == 1);
  CHECK(winding_degree(e3, 0.0, 0.0, 0.9) == 3);
  CHECK(winding_degree(c, 0.1, 0.1, 0.5) == 0);
  const auto zero = zero_field(p.mesh);
  CHECK_THROWS_AS(winding_degree(zero, 0.0, 0.0, 0.5), UndefinedDegreeError);
}

TEST_CASE("detection of synthetic vortices") {
  const auto& p = desk();
  {
    const auto one = field_from(p.mesh, [](cplx) { return cplx(1.0); });
    CHECK(detect_vortices(one).empty());
  }
  {
    const cplx a(0.3, 0.1);
    auto f = [&](cplx z) { return mollified(z, a, 1); };
    const auto balls = detect_vortices(field_from(p.mesh, f));
    REQUIRE(balls.size() == 1);
    CHECK(balls[0].degree == phase_sum(f, a, 0.2));
    CHECK(balls[0].degree == 1);
    CHECK(std::hypot(balls[0].x - a.real(), balls[0].y - a.imag()) < balls[0].radius);
  }
  {
    const cplx a(-0.3, 0.2), b(0.35, -0.25);
    auto f = [&](cplx z) { return mollified(z, a, 1) * mollified(z, b, -1); };
    const auto balls = detect_vortices(field_from(p.mesh, f));
    REQUIRE(balls.size() == 2);
    int plus = 0, minus = 0;
    for (const auto& ball : balls) (ball.degree > 0 ? plus : minus) += std::abs(ball.degree);
    CHECK(plus == 1);
    CHECK(minus == 1);
    const auto s = degree_statistics(balls, 0.5, 0.1);
    CHECK(s.d_total == 2);
    CHECK(std::hypot(balls[0].x - balls[1].x, balls[0].y - balls[1].y) >= balls[0].radius + balls[1].radius);
  }
  {
    // a zero on the boundary is kept with degree 0
    const cplx a(1.0, 0.0);
    const auto balls = detect_vortices(field_from(p.mesh, [&](cplx z) { return mollified(z, a, 1); }));
    REQUIRE(balls.size() == 1);
    CHECK(balls[0].touches_boundary);
    CHECK(balls[0].degree == 0);
  }
  CHECK_THROWS_AS(detect_vortices(zero_field(p.mesh), 1.5), ConfigError);
}

TEST_CASE("degree statistics") {
  CHECK(degree_statistics({}, 0.5, 0.1).d_total == 0);
  const std::vector<VortexBall> two{{0.6, 0.0, 0.05, 1, false}, {-0.6, 0.0, 0.05, 1, false}};
  const auto s = degree_statistics(two, 0.6, 0.01);
  CHECK(s.d_plus == 2);
  CHECK(s.d_minus == 0);
  CHECK(s.d_near_interface == 2);
  const std::vector<VortexBall> mixed{{0.1, 0.0, 0.05, 1, false}, {-0.1, 0.0, 0.05, -1, false}};
  const auto t = degree_statistics(mixed, 0.5, 0.1);
  CHECK(t.d_plus == 1);
  CHECK(t.d_minus == 1);
  CHECK(t.d_total == 2);
  CHECK(t.d_near_interface == 0);
}

TEST_CASE("Robin residual of the zero-field state") {
  const auto& p = desk();
  const double gamma = degennes_gamma(solve_canonical_profile(0.25));
  auto [psi, A] = meissner_configuration(p.u, p.london, 0.0, p.mesh);
  const double r2 = robin_residual(psi, A, p.u, gamma);
  CHECK(r2 == doctest::Approx(robin_residual_radial(p.u, gamma)).epsilon(1e-3));
  CHECK(robin_residual(psi, A, p.u, -gamma) > r2);
  const VortexSeed s{0.2, 0.0, 1};
  imprint_vortices(psi, std::span(&s, 1), 0.05);
  CHECK_THROWS_AS(robin_residual(psi, A, p.u, gamma), NotApplicableError);
}

TEST_CASE("sweep rejects bad grids") {
  const auto& p = desk();
  CHECK_THROWS_AS(critical_field_sweep(p, {}), ConfigError);
  CHECK_THROWS_AS(critical_field_sweep(p, {2.0, 1.0}), ConfigError);
}
