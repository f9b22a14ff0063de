#include <cmath>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "glpin/errors.hpp"
#include "glpin/model.hpp"

using namespace glpin;

TEST_CASE("model rejects a = 1 and bad parameters") {
  CHECK_THROWS_AS(PinningModel(1.0, 0.5, 0.05), DegenerateModelError);
  CHECK_THROWS_AS(PinningModel(-0.1, 0.5, 0.05), ConfigError);
  CHECK_THROWS_AS(PinningModel(0.25, 1.2, 0.05), ConfigError);
  CHECK_THROWS_AS(PinningModel(0.25, 0.5, 0.0), ConfigError);
}

TEST_CASE("step potential and band levels") {
  const PinningModel m(0.25, 0.5, 0.05);
  CHECK(step_potential(m, 0.3) == 1.0);
  CHECK(step_potential(m, 0.5) == 1.0);
  CHECK(step_potential(m, 0.7) == 0.25);
  CHECK(m.lower_level() == doctest::Approx(0.5));
  CHECK(m.upper_level() == 1.0);
  const PinningModel m4(4.0, 0.5, 0.05);
  CHECK(m4.lower_level() == 1.0);
  CHECK(m4.upper_level() == doctest::Approx(2.0));
}

TEST_CASE("graded grid contains R and resolves the layer") {
  const PinningModel m(0.25, 0.5, 0.05);
  const auto g = graded_radial_grid(m, 192);
  CHECK(g.size() == 192);
  CHECK(g[0] == 0.0);
  CHECK(g[g.size() - 1] == 1.0);
  CHECK(g[g.interface_index()] == 0.5);
  double vol = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) vol += g.volume(i);
  CHECK(vol == doctest::Approx(std::numbers::pi).epsilon(1e-14));
  const DiscMesh mesh(g, 256);
  CHECK(mesh.min_spacing_near(0.5, 0.05) <= 0.025);
}

TEST_CASE("disc mesh bookkeeping") {
  const PinningModel m(0.25, 0.5, 0.1);
  const DiscMesh mesh(graded_radial_grid(m, 64), 32);
  CHECK(mesh.num_nodes() == 1 + 63 * 32);
  CHECK(mesh.total_area() == doctest::Approx(std::numbers::pi).epsilon(1e-13));
  double vol = 0.0;
  for (std::size_t n = 0; n < mesh.num_nodes(); ++n) vol += mesh.node_volume(n);
  CHECK(vol == doctest::Approx(std::numbers::pi).epsilon(1e-13));
  const std::size_t n = mesh.node(7, 31);
  CHECK(mesh.ring_of(n) == 7);
  CHECK(mesh.angle_of(n) == 31);
  CHECK(mesh.node(7, 32) == mesh.node(7, 0));
  CHECK(mesh.nearest_node(mesh.x(n), mesh.y(n)) == n);
  CHECK(mesh.nearest_node(0.0, 0.0) == 0);
}

TEST_CASE("key = value config") {
  const auto path = std::filesystem::temp_directory_path() / "glpin_model_test.cfg";
  {
    std::ofstream f(path);
    f << "# comment\na = 4\nepsilon = 0.02\ngrid.n_theta = 128\n";
  }
  const auto c = read_model_config(path);
  CHECK(c.a == 4.0);
  CHECK(c.epsilon == 0.02);
  CHECK(c.R == 0.5);
  CHECK(c.n_theta == 128);
  {
    std::ofstream f(path);
    f << "b = 1\n";
  }
  CHECK_THROWS_AS(read_model_config(path), ConfigError);
  std::filesystem::remove(path);
}
