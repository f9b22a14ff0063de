// glpin: command-line driver for the pinned Ginzburg-Landau solvers.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "glpin/errors.hpp"
#include "glpin/green.hpp"
#include "glpin/verify.hpp"
#include "glpin/vortices.hpp"

using namespace glpin;
using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr int kSchemaVersion = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitViolation = 4;

struct RunConfig {
  double a = 0.25, R = 0.5, eps = 0.05;
  double H = 0.0;
  std::size_t n_r = 192, n_theta = 256;
  int n = 1;
  std::uint64_t seed = 1;
  std::string out;  // output directory; empty: JSON to stdout only
  std::string config;

  // subcommand options
  std::string init = "policy";
  int max_iterations = 20000;
  std::string input;
  double threshold = 0.5;
  std::vector<double> h_factors{0.3, 0.6, 1.0, 1.5, 2.0, 3.0};
  std::vector<double> probes;
  double xi2 = 0.0;
  int restarts = 8;
};

// key = value lines; '#' starts a comment. Keys mirror the long flags.
void apply_config_file(RunConfig& c) {
  if (c.config.empty()) return;
  std::ifstream in(c.config);
  if (!in) throw ConfigError("cannot open config file " + c.config);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string key, eq, val;
    if (!(ls >> key)) continue;
    if (!(ls >> eq >> val) || eq != "=") throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    try {
      if (key == "a") c.a = std::stod(val);
      else if (key == "R") c.R = std::stod(val);
      else if (key == "eps" || key == "epsilon") c.eps = std::stod(val);
      else if (key == "H") c.H = std::stod(val);
      else if (key == "grid" || key == "grid.n_r") c.n_r = std::stoul(val);
      else if (key == "mesh" || key == "grid.n_theta") c.n_theta = std::stoul(val);
      else if (key == "n") c.n = std::stoi(val);
      else if (key == "seed") c.seed = std::stoull(val);
      else if (key == "out") c.out = val;
      else if (key == "max_iterations") c.max_iterations = std::stoi(val);
      else if (key == "init") c.init = val;
      else if (key == "threshold") c.threshold = std::stod(val);
      else if (key == "restarts") c.restarts = std::stoi(val);
      else if (key == "xi2") c.xi2 = std::stod(val);
      else throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("config line " + std::to_string(lineno) + ": bad value for " + key);
    }
  }
}

PinningModel model_of(const RunConfig& c) { return PinningModel(c.a, c.R, c.eps); }

json header(const std::string& command, const RunConfig& c) {
  return json{{"schema_version", kSchemaVersion},
              {"command", command},
              {"model", {{"a", c.a}, {"R", c.R}, {"epsilon", c.eps}}}};
}

fs::path output_path(const RunConfig& c, const std::string& name) {
  fs::create_directories(c.out);
  return fs::path(c.out) / name;
}

void emit(const RunConfig& c, const std::string& name, const json& j) {
  const std::string text = j.dump(2);
  std::cout << text << '\n';
  if (!c.out.empty()) std::ofstream(output_path(c, name)) << text << '\n';
}

json energy_json(const EnergyBreakdown& e) {
  return {{"kinetic", e.kinetic}, {"potential", e.potential}, {"field", e.field}, {"total", e.total}};
}

json balls_json(const std::vector<VortexBall>& balls) {
  json arr = json::array();
  for (const auto& b : balls)
    arr.push_back({{"x", b.x}, {"y", b.y}, {"radius", b.radius}, {"degree", b.degree},
                   {"touches_boundary", b.touches_boundary}});
  return arr;
}

json stats_json(const DegreeStats& s) {
  return {{"d_plus", s.d_plus}, {"d_minus", s.d_minus}, {"d_total", s.d_total},
          {"d_near_interface", s.d_near_interface}};
}

void write_fields(const fs::path& path, const Field2D& psi, const Gauge2D& A) {
  const DiscMesh& m = *psi.mesh;
  const auto pot = nodal_potential(A);
  std::ofstream f(path);
  f.precision(17);
  f << "r,theta,re_psi,im_psi,a_r,a_theta\n";
  for (std::size_t n = 0; n < m.num_nodes(); ++n)
    f << m.r_of(n) << ',' << m.theta_of(n) << ',' << psi.psi[n].real() << ',' << psi.psi[n].imag() << ','
      << pot.a_r[n] << ',' << pot.a_theta[n] << '\n';
}

Field2D read_fields(const fs::path& path, MeshPtr mesh) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open field dump " + path.string());
  std::string line;
  std::getline(f, line);
  Field2D psi = zero_field(mesh);
  std::size_t n = 0;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    if (n >= psi.psi.size()) throw MeshMismatchError("field dump has more rows than the mesh has nodes");
    std::istringstream ls(line);
    double v[6];
    char comma;
    for (int k = 0; k < 6; ++k)
      if (!(ls >> v[k]) || (k < 5 && !(ls >> comma)))
        throw ConfigError("field dump row " + std::to_string(n + 2) + " is malformed");
    psi.psi[n++] = {v[2], v[3]};
  }
  if (n != psi.psi.size()) throw MeshMismatchError("field dump row count differs from the mesh");
  return psi;
}

// ---------------------------------------------------------------------------

int cmd_profile(const RunConfig& c) {
  const auto model = model_of(c);
  const auto U = solve_canonical_profile(c.a);
  const auto audit = audit_closed_form(U);
  const auto u = solve_radial_minimizer(model, graded_radial_grid(model, c.n_r));
  json j = header("profile", c);
  j["canonical"] = {{"interface_value", U.interface_value()},
                    {"slope", U.slope_left()},
                    {"gamma", degennes_gamma(U)},
                    {"matching_residual", U.matching_residual()},
                    {"closed_form_consistent", audit.consistent},
                    {"closed_form_max_deviation", audit.max_deviation}};
  j["radial"] = {{"n_r", c.n_r},
                 {"c0", energy_c0(u).value},
                 {"residual", u.residual},
                 {"newton_iterations", u.newton_iterations},
                 {"within_band", within_band(u)},
                 {"monotone", is_monotone(u)},
                 {"robin_ratio", robin_ratio(u, degennes_gamma(U))}};
  if (!c.out.empty()) {
    std::ofstream f(output_path(c, "profile.csv"));
    f.precision(17);
    f << "r,u,canonical\n";
    for (std::size_t i = 0; i < u.size(); ++i)
      f << u.grid[i] << ',' << u[i] << ',' << U((u.grid[i] - c.R) / c.eps) << '\n';
  }
  emit(c, "profile.json", j);
  return 0;
}

int cmd_london(const RunConfig& c) {
  const auto model = model_of(c);
  const auto sol = solve_london(solve_radial_minimizer(model, graded_radial_grid(model, c.n_r)));
  json j = header("london", c);
  const bool centre = sol.attractor.kind == Attractor::Kind::CenterPoint;
  j["k_eps"] = sol.k_eps;
  j["lambda_eps"] = sol.lambda_eps;
  j["j0"] = j0_energy(sol).value;
  j["attractor"] = {{"kind", centre ? "center_point" : "circle"}, {"radius", sol.attractor.radius}};
  j["xi_second_derivative_at_origin"] = xi_second_derivative_at_origin(sol);
  j["interface_flux_jump"] = interface_flux_jump(sol);
  j["residual"] = sol.residual;
  if (!c.out.empty()) {
    std::ofstream f(output_path(c, "london.csv"));
    f.precision(17);
    f << "r,u,h,xi\n";
    for (std::size_t i = 0; i < sol.h.size(); ++i)
      f << sol.grid()[i] << ',' << sol.u[i] << ',' << sol.h[i] << ',' << sol.xi[i] << '\n';
  }
  emit(c, "london.json", j);
  return 0;
}

int cmd_minimize(const RunConfig& c) {
  const Problem p = make_problem(model_of(c), c.n_r, c.n_theta);
  PolicyOptions po;
  po.minimize.max_iterations = c.max_iterations;
  if (c.n > 0) po.seed_counts = {c.n};
  MinimizeResult r;
  std::string init = c.init;
  if (c.init == "policy") {
    auto pr = minimize_with_policy(p, c.H, po);
    r = std::move(pr.best);
    init = pr.init;
  } else if (c.init == "meissner") {
    auto [psi, A] = meissner_configuration(p.u, p.london, c.H, p.mesh);
    r = minimize(p.model, c.H, psi, A, po.minimize);
  } else if (c.init == "random") {
    auto [psi, A] = random_smooth_state(p.mesh, c.seed);
    r = minimize(p.model, c.H, psi, A, po.minimize);
  } else {
    throw ConfigError("unknown init '" + c.init + "' (policy, meissner, random)");
  }
  const auto balls = detect_vortices(phi_view(r.psi, p.u));
  json j = header("minimize", c);
  j["H"] = c.H;
  j["h_over_field_scale"] = c.H / p.field_scale();
  j["init"] = init;
  j["energy"] = energy_json(r.energy);
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["gradient_norm"] = r.gradient_norm;
  j["monotone"] = r.monotone;
  j["vortices"] = balls_json(balls);
  j["degrees"] = stats_json(degree_statistics(balls, c.R, std::pow(p.model.log_inv_eps(), -0.25)));
  j["vorticity_integral"] = vorticity_integral(phi_view(r.psi, p.u), r.A);
  if (!c.out.empty()) write_fields(output_path(c, "fields.csv"), r.psi, r.A);
  emit(c, "minimize.json", j);
  return 0;
}

int cmd_detect(const RunConfig& c) {
  if (c.input.empty()) throw ConfigError("detect needs --in <fields.csv>");
  const auto model = model_of(c);
  const Problem p = make_problem(model, c.n_r, c.n_theta);
  const auto psi = read_fields(c.input, p.mesh);
  const auto balls = detect_vortices(phi_view(psi, p.u), c.threshold);
  json j = header("detect", c);
  j["threshold"] = c.threshold;
  j["vortices"] = balls_json(balls);
  j["degrees"] = stats_json(degree_statistics(balls, c.R, std::pow(model.log_inv_eps(), -0.25)));
  emit(c, "detect.json", j);
  return 0;
}

int cmd_sweep(const RunConfig& c) {
  const Problem p = make_problem(model_of(c), c.n_r, c.n_theta);
  std::vector<double> grid;
  for (double f : c.h_factors) grid.push_back(f * p.field_scale());
  PolicyOptions po;
  po.minimize.max_iterations = c.max_iterations;
  if (c.n > 0) po.seed_counts = {c.n};
  json j = header("sweep", c);
  j["k_eps"] = p.london.k_eps;
  j["field_scale"] = p.field_scale();
  auto table = [&](const std::vector<SweepPoint>& rows) {
    json arr = json::array();
    for (const auto& s : rows)
      arr.push_back({{"H", s.H}, {"energy", s.energy}, {"init", s.init}, {"converged", s.converged},
                     {"degrees", stats_json(s.stats)}});
    if (!c.out.empty()) {
      std::ofstream f(output_path(c, "sweep.csv"));
      f.precision(17);
      f << "H,energy,d_total,d_plus,d_near_interface\n";
      for (const auto& s : rows)
        f << s.H << ',' << s.energy << ',' << s.stats.d_total << ',' << s.stats.d_plus << ','
          << s.stats.d_near_interface << '\n';
    }
    return arr;
  };
  const auto est = critical_field_sweep(p, grid, po);
  j["h_lo"] = est.H_lo;
  j["h_hi"] = est.H_hi;
  j["ratio"] = est.ratio;
  j["table"] = table(est.table);
  emit(c, "sweep.json", j);
  return 0;
}

int cmd_greens(const RunConfig& c) {
  const Problem p = make_problem(model_of(c), c.n_r, c.n_theta);
  const GreenOperator op(p.u, p.mesh);
  if (c.probes.size() % 2 != 0 || c.probes.empty())
    throw ConfigError("greens needs --probe x,y pairs (source first)");
  const auto g = op.kernel(c.probes[0], c.probes[1]);
  const double uy = p.u[p.mesh->ring_of(g.source_node)];
  json j = header("greens", c);
  j["source"] = {{"x", g.source.x}, {"y", g.source.y}};
  j["regular_part_at_source"] = g.regular_part[g.source_node];
  j["log_coefficient_expected"] = uy * uy / (2 * std::numbers::pi);
  j["log_coefficient_fit"] = green_log_slope(g, *p.mesh, 3 * c.eps, 10 * c.eps);
  json probes = json::array();
  for (std::size_t k = 2; k + 1 < c.probes.size(); k += 2) {
    const std::size_t node = p.mesh->nearest_node(c.probes[k], c.probes[k + 1]);
    probes.push_back({{"x", p.mesh->x(node)}, {"y", p.mesh->y(node)}, {"g", g.values[node]},
                      {"regular_part", g.regular_part[node]}});
  }
  j["probes"] = probes;
  emit(c, "greens.json", j);
  return 0;
}

int cmd_testconfig(const RunConfig& c) {
  const Problem p = make_problem(model_of(c), c.n_r, c.n_theta);
  const GreenOperator op(p.u, p.mesh);
  const auto cfg = build_test_configuration(op, c.n);
  const auto e = test_config_energy(op, cfg, p.london, c.H);
  json j = header("testconfig", c);
  j["H"] = c.H;
  j["n"] = c.n;
  j["r_eps"] = cfg.sites.r_eps;
  json sites = json::array();
  for (const auto& s : cfg.sites.sites) sites.push_back({{"x", s.x}, {"y", s.y}});
  j["sites"] = sites;
  j["max_regular_part"] = cfg.sites.max_regular;
  j["energy"] = {{"meissner", e.meissner}, {"kinetic_rho", e.kinetic_rho}, {"current", e.current},
                 {"field", e.field},       {"potential", e.potential},     {"cross", e.cross},
                 {"amplitude", e.amplitude}, {"total", e.total}};
  j["green_identity"] = {{"dirichlet", e.dirichlet}, {"double_integral", e.green_double},
                         {"relative_error", e.identity_error}};
  emit(c, "testconfig.json", j);
  return 0;
}

int cmd_wmin(const RunConfig& c) {
  double xi2 = c.xi2;
  if (xi2 <= 0.0) {
    const auto model = model_of(c);
    const auto sol = solve_london(solve_radial_minimizer(model, graded_radial_grid(model, c.n_r)));
    xi2 = xi_second_derivative_at_origin(sol);
    if (!(xi2 > 0.0)) throw NotApplicableError("xi''(0) <= 0: the renormalized energy needs a > 1 or --xi2");
  }
  const auto r = minimize_renormalized(c.n, xi2, c.restarts, c.seed);
  json j = header("wmin", c);
  j["n"] = c.n;
  j["xi2"] = xi2;
  json pts = json::array();
  for (const auto& s : r.points) pts.push_back({{"x", s.x}, {"y", s.y}});
  j["points"] = pts;
  j["value"] = r.value;
  j["gradient_norm"] = r.gradient_norm;
  emit(c, "wmin.json", j);
  return 0;
}

int cmd_verify(const RunConfig& c) {
  VerifyOptions vo;
  vo.epsilon = c.eps;
  vo.n_r = c.n_r;
  vo.n_theta = c.n_theta;
  const auto checks = verify_invariants(vo);
  json j = header("verify", c);
  json arr = json::array();
  int failed = 0;
  for (const auto& k : checks) {
    arr.push_back({{"module", k.module}, {"name", k.name}, {"passed", k.passed}, {"value", k.value},
                   {"bound", k.bound}});
    if (!k.passed) ++failed;
    std::cerr << (k.passed ? "PASS " : "FAIL ") << k.module << ": " << k.name << " (" << k.value << " vs "
              << k.bound << ")\n";
  }
  j["checks"] = arr;
  j["failed"] = failed;
  emit(c, "verify.json", j);
  return failed == 0 ? 0 : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ginzburg-Landau vortices with a step pinning term on the unit disc"};
  app.require_subcommand(1);
  RunConfig c;
  auto common = [&](CLI::App* s) {
    s->add_option("--a", c.a, "pinning level outside the inner disc");
    s->add_option("--R", c.R, "interface radius");
    s->add_option("--eps", c.eps, "coherence length epsilon");
    s->add_option("--H", c.H, "applied field");
    s->add_option("--grid", c.n_r, "radial nodes");
    s->add_option("--mesh", c.n_theta, "angular nodes");
    s->add_option("--n", c.n, "vortex / site count");
    s->add_option("--seed", c.seed, "seed for random initial states");
    s->add_option("--out", c.out, "output directory");
    s->add_option("--config", c.config, "key = value file overriding the flags");
  };
  std::map<std::string, std::function<int(const RunConfig&)>> handlers{
      {"profile", cmd_profile}, {"london", cmd_london},       {"minimize", cmd_minimize},
      {"detect", cmd_detect},   {"sweep", cmd_sweep},         {"greens", cmd_greens},
      {"testconfig", cmd_testconfig}, {"wmin", cmd_wmin},    {"verify", cmd_verify}};
  std::map<std::string, CLI::App*> subs;
  const std::map<std::string, std::string> descriptions{
      {"profile", "canonical interface profile and radial minimizer"},
      {"london", "weighted London field, landscape and attractor"},
      {"minimize", "2-D energy minimization at one applied field"},
      {"detect", "vortex balls and degrees of a saved state"},
      {"sweep", "minimize over an H grid and bracket the first critical field"},
      {"greens", "Green kernel of the weighted operator"},
      {"testconfig", "energy of the n-vortex test configuration"},
      {"wmin", "minimize the renormalized point-vortex energy"},
      {"verify", "run the invariant checks"}};
  for (const auto& [name, fn] : handlers) subs[name] = app.add_subcommand(name, descriptions.at(name));
  for (auto& [name, s] : subs) common(s);
  subs["minimize"]->add_option("--init", c.init, "policy, meissner or random");
  subs["minimize"]->add_option("--max-iterations", c.max_iterations, "L-BFGS iteration cap");
  subs["sweep"]->add_option("--max-iterations", c.max_iterations, "L-BFGS iteration cap per field");
  subs["sweep"]->add_option("--factors", c.h_factors, "H grid in units of k_eps |ln eps|")->delimiter(',');
  subs["detect"]->add_option("--in", c.input, "fields.csv written by minimize");
  subs["detect"]->add_option("--threshold", c.threshold, "|phi| level bounding the vortex cores");
  subs["greens"]->add_option("--probe", c.probes, "x,y of the source, then x,y of each probe")->delimiter(',');
  subs["wmin"]->add_option("--xi2", c.xi2, "confinement coefficient (default: from the London solve)");
  subs["wmin"]->add_option("--restarts", c.restarts, "random starts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  try {
    apply_config_file(c);
    for (const auto& [name, s] : subs)
      if (s->parsed()) return handlers.at(name)(c);
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const PostconditionError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const OutOfRangeError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::logic_error& e) {
    std::cerr << "not applicable: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitConfig;
}
