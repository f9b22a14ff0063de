#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "glpin/errors.hpp"
#include "glpin/green.hpp"

using namespace glpin;

namespace {
constexpr double kPi = std::numbers::pi;

const Problem& desk() {
  static const Problem p = make_problem(PinningModel(0.25, 0.5, 0.05), 192, 256);
  return p;
}

// 1-D oracle for the antipodal pair: minimize -4 pi ln s + pi xi2 s^2 by
// golden-section search.
double pair_separation(double xi2) {
  auto f = [&](double s) { return -4 * kPi * std::log(s) + kPi * xi2 * s * s; };
  double lo = 1e-3, hi = 10.0;
  const double g = (std::sqrt(5.0) - 1) / 2;
  for (int k = 0; k < 200; ++k) {
    const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    (f(a) < f(b) ? hi : lo) = f(a) < f(b) ? b : a;
  }
  return 0.5 * (lo + hi);
}
}  // namespace

TEST_CASE("Green kernel: symmetry, boundary, positivity") {
  const auto& p = desk();
  const GreenOperator op(p.u, p.mesh);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-0.6, 0.6);
  for (int k = 0; k < 5; ++k) {
    const auto g1 = op.kernel(U(rng), U(rng));
    const auto g2 = op.kernel(U(rng), U(rng));
    CHECK(std::abs(g1.values[g2.source_node] - g2.values[g1.source_node]) < 1e-6);
  }
  const auto g = op.kernel(0.1, 0.2);
  const auto& m = *p.mesh;
  for (std::size_t j = 0; j < m.n_theta(); ++j) CHECK(g.values[m.node(m.n_r() - 1, j)] == 0.0);
  for (double v : g.values) CHECK(v >= 0.0);
  CHECK_THROWS_AS(op.kernel(0.999, 0.0), DomainError);
  CHECK_THROWS_AS(op.kernel(1.5, 0.0), DomainError);
}

TEST_CASE("Green kernel log coefficient") {
  const PinningModel model(0.25, 0.5, 0.02);
  const auto p = make_problem(model, 256, 512);
  const GreenOperator op(p.u, p.mesh);
  const auto g = op.kernel(0.05, 0.0);
  const double u = p.u[p.mesh->ring_of(g.source_node)];
  const double slope = green_log_slope(g, *p.mesh, 3 * model.epsilon(), 10 * model.epsilon());
  CHECK(slope == doctest::Approx(u * u / (2 * kPi)).epsilon(0.05));
}

TEST_CASE("site selection") {
  const auto& p = desk();
  const GreenOperator op(p.u, p.mesh);
  const auto one = select_sites(op, 1);
  CHECK(one.sites.size() == 1);
  CHECK(std::hypot(one.sites[0].x, one.sites[0].y) == doctest::Approx(test_circle_radius(p.model)));
  const auto four = select_sites(op, 4);
  REQUIRE(four.sites.size() == 4);
  const double d01 = std::hypot(four.sites[0].x - four.sites[1].x, four.sites[0].y - four.sites[1].y);
  for (int k = 1; k < 4; ++k) {
    const auto& a = four.sites[k];
    const auto& b = four.sites[(k + 1) % 4];
    CHECK(std::abs(std::hypot(a.x - b.x, a.y - b.y) - d01) < 1e-9);
  }
  CHECK(std::isfinite(four.max_regular));
  CHECK_THROWS_AS(select_sites(op, 40), TooManySitesError);
}

TEST_CASE("test configuration") {
  const auto& p = desk();
  const GreenOperator op(p.u, p.mesh);
  const double H = 0.5 * p.field_scale();
  {
    const auto cfg = build_test_configuration(op, 2);
    double mass = 0.0;
    for (double v : cfg.load) mass += v;
    CHECK(mass == doctest::Approx(4 * kPi).epsilon(1e-3));
    const auto& m = *p.mesh;
    for (std::size_t j = 0; j < m.n_theta(); ++j) CHECK(cfg.h_prime[m.node(m.n_r() - 1, j)] == 0.0);
    for (double r : cfg.rho) CHECK((r >= 0.0 && r <= 1.0));
    for (std::size_t probe : {std::size_t{0}, m.node(100, 3), m.node(150, 200), m.node(60, 77), m.node(170, 128)})
      CHECK(std::abs(green_representation(op, cfg, probe) - cfg.h_prime[probe]) < 1e-4);
    const auto e = test_config_energy(op, cfg, p.london, H);
    CHECK(e.identity_error < 1e-3);
    CHECK(e.total == doctest::Approx(e.meissner + e.kinetic_rho + e.current + e.field + e.potential + e.cross +
                                     e.amplitude));
  }
  double prev = -1e300;
  for (int n = 1; n <= 3; ++n) {
    const auto e = test_config_energy(op, build_test_configuration(op, n), p.london, H);
    CHECK(e.total > prev);
    prev = e.total;
  }
}

TEST_CASE("renormalized energy") {
  const Site one{0.3, -0.2};
  const auto w1 = renormalized_energy(std::span(&one, 1), 1.5);
  CHECK(w1.value == doctest::Approx(2 * kPi * 1.5 * 0.13));
  const std::vector<Site> same{{0.1, 0.1}, {0.1, 0.1}};
  CHECK_THROWS_AS(renormalized_energy(same, 1.0), SingularInputError);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Site> pts(4);
    for (auto& q : pts) q = {U(rng), U(rng)};
    const auto w = renormalized_energy(pts, 0.7);
    for (std::size_t k = 0; k < 8; ++k) {
      auto a = pts, b = pts;
      const double h = 1e-6;
      (k % 2 ? a[k / 2].y : a[k / 2].x) += h;
      (k % 2 ? b[k / 2].y : b[k / 2].x) -= h;
      const double fd = (renormalized_energy(a, 0.7).value - renormalized_energy(b, 0.7).value) / (2 * h);
      CHECK(std::abs(fd - w.gradient[k]) <= 1e-6 * std::max(1.0, std::abs(w.gradient[k])));
    }
    // rotation invariance
    const double t = U(rng);
    auto rot = pts;
    for (auto& q : rot) q = {std::cos(t) * q.x - std::sin(t) * q.y, std::sin(t) * q.x + std::cos(t) * q.y};
    CHECK(renormalized_energy(rot, 0.7).value == doctest::Approx(w.value).epsilon(1e-12));
    // doubling xi2 doubles the confinement only
    const auto w2 = renormalized_energy(pts, 1.4);
    CHECK(w2.confinement == doctest::Approx(2 * w.confinement).epsilon(1e-14));
    CHECK(w2.interaction == w.interaction);
  }
}

TEST_CASE("renormalized minimizers") {
  const auto m1 = minimize_renormalized(1, 2.0);
  CHECK(std::hypot(m1.points[0].x, m1.points[0].y) < 1e-8);

  const auto m2 = minimize_renormalized(2, 1.0);
  const double s = std::hypot(m2.points[0].x - m2.points[1].x, m2.points[0].y - m2.points[1].y);
  CHECK(std::abs(s - pair_separation(1.0)) < 1e-6);
  CHECK(std::abs(m2.points[0].x + m2.points[1].x) < 1e-6);
  CHECK(m2.gradient_norm < 1e-8);

  const auto m3 = minimize_renormalized(3, 1.0);
  const auto d = [&](int i, int j) {
    return std::hypot(m3.points[i].x - m3.points[j].x, m3.points[i].y - m3.points[j].y);
  };
  CHECK(std::abs(d(0, 1) - d(1, 2)) < 1e-6);
  CHECK(std::abs(d(1, 2) - d(2, 0)) < 1e-6);
  CHECK(std::abs(m3.points[0].x + m3.points[1].x + m3.points[2].x) < 1e-6);
  CHECK(m3.points[0].y == 0.0);
  CHECK(m3.points[0].x > 0.0);
}
