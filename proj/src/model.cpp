#include "glpin/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "glpin/errors.hpp"

namespace glpin {

namespace {
constexpr double kPi = std::numbers::pi;
}

PinningModel::PinningModel(double a, double R, double epsilon) : a_(a), R_(R), eps_(epsilon) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("pinning level a must be positive");
  if (a == 1.0) throw DegenerateModelError("a = 1 gives a flat potential with the trivial profile U = 1");
  if (!(R > 0.0 && R < 1.0)) throw ConfigError("interface radius R must lie in (0,1)");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0,1)");
}

double PinningModel::sqrt_a() const noexcept { return std::sqrt(a_); }
double PinningModel::lower_level() const noexcept { return std::min(1.0, sqrt_a()); }
double PinningModel::upper_level() const noexcept { return std::max(1.0, sqrt_a()); }
double PinningModel::log_inv_eps() const noexcept { return std::abs(std::log(eps_)); }

double step_potential(const PinningModel& model, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("step_potential: r must lie in [0,1]");
  return r <= model.R() ? 1.0 : model.a();
}

// ---------------------------------------------------------------------------

RadialGrid::RadialGrid(std::vector<double> nodes, double R) : r_(std::move(nodes)), R_(R) {
  if (r_.size() < 3) throw ConfigError("radial grid needs at least 3 nodes");
  if (r_.front() != 0.0 || r_.back() != 1.0) throw ConfigError("radial grid must start at 0 and end at 1");
  int hits = 0;
  for (std::size_t i = 0; i < r_.size(); ++i) {
    if (i > 0 && !(r_[i] > r_[i - 1])) throw ConfigError("radial grid must be strictly increasing");
    if (r_[i] == R) {
      ++hits;
      iR_ = i;
    }
  }
  if (hits != 1) throw ConfigError("radial grid must contain R exactly once");

  const std::size_t n = r_.size();
  vin_.assign(n, 0.0);
  vout_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = i == 0 ? 0.0 : face(i - 1);
    const double hi = i + 1 == n ? 1.0 : face(i);
    const double cut_lo = std::min(lo, R_), cut_hi = std::min(hi, R_);
    vin_[i] = kPi * (cut_hi * cut_hi - cut_lo * cut_lo);
    const double o_lo = std::max(lo, R_), o_hi = std::max(hi, R_);
    vout_[i] = kPi * (o_hi * o_hi - o_lo * o_lo);
  }
}

double RadialGrid::face(std::size_t i) const { return 0.5 * (r_[i] + r_[i + 1]); }

double RadialGrid::face_weight(std::size_t i) const { return 2.0 * kPi * face(i) / spacing(i); }

std::size_t RadialGrid::locate(double r) const {
  // control volume i spans [face(i-1), face(i)]
  std::size_t lo = 0, hi = r_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (r < face(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

bool RadialGrid::same_nodes(const RadialGrid& other) const { return r_ == other.r_ && R_ == other.R_; }

// ---------------------------------------------------------------------------

namespace {

// Node density 1 + A sech^2((r-R)/(W eps)); returns the normalised cumulative map.
struct GradingMap {
  double A, W, R, eps, total;
  double cumulative(double r) const {
    const double L = W * eps;
    return r + A * L * (std::tanh((r - R) / L) + std::tanh(R / L));
  }
  double density(double r) const {
    const double c = std::cosh((r - R) / (W * eps));
    return 1.0 + A / (c * c);
  }
  double invert(double s) const {
    // Newton safeguarded by bisection on [0,1]; cumulative is increasing.
    double lo = 0.0, hi = 1.0, x = std::clamp(s / total, 0.0, 1.0);
    const double target = s;
    for (int it = 0; it < 200; ++it) {
      const double f = cumulative(x) - target;
      if (f > 0) hi = x; else lo = x;
      double nx = x - f / density(x);
      if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
      if (std::abs(nx - x) < 1e-16) { x = nx; break; }
      x = nx;
    }
    return x;
  }
};

}  // namespace

RadialGrid graded_radial_grid(const PinningModel& model, std::size_t n) {
  if (n < 64) throw ConfigError("graded_radial_grid: need at least 64 nodes");
  const double eps = model.epsilon(), R = model.R();
  constexpr double W = 6.0;
  const double L = W * eps;
  const double layer = L * (std::tanh((1.0 - R) / L) + std::tanh(R / L));

  // Target spacing eps/K at the interface, largest K that keeps at most 60% of
  // the nodes inside the layer.
  double A = 0.0;
  for (double K : {16.0, 12.0, 10.0, 8.0, 6.0, 4.0, 3.0, 2.5}) {
    const double q = static_cast<double>(n - 1) * eps / K;
    const double den = layer - q;
    const double num = q - 1.0;
    double cand;
    if (num >= 0.0) {
      cand = 0.0;  // uniform spacing is already fine enough
    } else if (den < 0.0) {
      cand = num / den;
    } else {
      continue;
    }
    const double frac = (cand * layer * std::tanh(1.0)) / (1.0 + cand * layer);
    if (frac <= 0.6) {
      A = cand;
      break;
    }
  }

  GradingMap map{A, W, R, eps, 0.0};
  map.total = map.cumulative(1.0);
  const double sR = map.cumulative(R);
  auto m = static_cast<std::size_t>(std::lround(sR / map.total * static_cast<double>(n - 1)));
  m = std::clamp<std::size_t>(m, 2, n - 3);

  std::vector<double> r(n);
  for (std::size_t k = 0; k <= m; ++k) r[k] = map.invert(sR * static_cast<double>(k) / static_cast<double>(m));
  for (std::size_t k = m + 1; k < n; ++k)
    r[k] = map.invert(sR + (map.total - sR) * static_cast<double>(k - m) / static_cast<double>(n - 1 - m));
  r[0] = 0.0;
  r[m] = R;
  r[n - 1] = 1.0;

  RadialGrid grid(std::move(r), R);
  std::size_t in_layer = 0;
  for (double ri : grid.nodes())
    if (std::abs(ri - R) <= 5.0 * eps) ++in_layer;
  if (in_layer < 20)
    throw ConfigError("graded_radial_grid: " + std::to_string(n) + " nodes cannot resolve the interface layer");
  return grid;
}

// ---------------------------------------------------------------------------

DiscMesh::DiscMesh(RadialGrid radial, std::size_t n_theta)
    : radial_(std::move(radial)), nt_(n_theta), dth_(2.0 * kPi / static_cast<double>(n_theta)) {
  if (n_theta < 8 || n_theta % 2 != 0) throw ConfigError("DiscMesh: n_theta must be even and >= 8");
}

double DiscMesh::x(std::size_t node) const { return r_of(node) * std::cos(theta_of(node)); }
double DiscMesh::y(std::size_t node) const { return r_of(node) * std::sin(theta_of(node)); }

double DiscMesh::node_volume(std::size_t node) const {
  const std::size_t i = ring_of(node);
  return i == 0 ? radial_.volume(0) : radial_.volume(i) / static_cast<double>(nt_);
}
double DiscMesh::node_volume_inner(std::size_t node) const {
  const std::size_t i = ring_of(node);
  return i == 0 ? radial_.volume_inner(0) : radial_.volume_inner(i) / static_cast<double>(nt_);
}
double DiscMesh::node_volume_outer(std::size_t node) const {
  const std::size_t i = ring_of(node);
  return i == 0 ? radial_.volume_outer(0) : radial_.volume_outer(i) / static_cast<double>(nt_);
}

double DiscMesh::radial_weight(std::size_t i) const { return radial_.face(i) * dth_ / radial_.spacing(i); }

double DiscMesh::angular_weight(std::size_t ring) const {
  const double lo = radial_.face(ring - 1);
  const double hi = ring + 1 == n_r() ? 1.0 : radial_.face(ring);
  return (hi - lo) / (radial_[ring] * dth_);
}

double DiscMesh::cell_area(std::size_t i) const {
  const double r0 = radial_[i], r1 = radial_[i + 1];
  return 0.5 * dth_ * (r1 * r1 - r0 * r0);
}

std::size_t DiscMesh::nearest_node(double px, double py) const {
  const double r = std::hypot(px, py);
  const std::size_t ring = radial_.locate(std::min(r, 1.0));
  if (ring == 0) return 0;
  double th = std::atan2(py, px);
  if (th < 0) th += 2.0 * kPi;
  const auto j = static_cast<std::size_t>(std::lround(th / dth_)) % nt_;
  return node(ring, j);
}

double DiscMesh::total_area() const {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < n_r(); ++i) s += cell_area(i) * static_cast<double>(nt_);
  return s;
}

double DiscMesh::min_spacing_near(double r0, double width) const {
  double h = 1.0;
  for (std::size_t i = 0; i + 1 < n_r(); ++i) {
    if (std::abs(radial_.face(i) - r0) <= width) h = std::min(h, radial_.spacing(i));
  }
  return h;
}

// ---------------------------------------------------------------------------

ModelConfig read_model_config(const std::filesystem::path& path, ModelConfig cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    try {
      std::size_t used = 0;
      if (key == "a") {
        cfg.a = std::stod(val, &used);
      } else if (key == "R") {
        cfg.R = std::stod(val, &used);
      } else if (key == "epsilon") {
        cfg.epsilon = std::stod(val, &used);
      } else if (key == "grid.n_r") {
        cfg.n_r = std::stoul(val, &used);
      } else if (key == "grid.n_theta") {
        cfg.n_theta = std::stoul(val, &used);
      } else {
        throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
      }
      if (used != val.size()) throw std::invalid_argument(val);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("config line " + std::to_string(lineno) + ": bad value '" + val + "' for " + key);
    }
  }
  return cfg;
}

}  // namespace glpin
