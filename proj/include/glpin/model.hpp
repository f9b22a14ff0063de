#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace glpin {

using cplx = std::complex<double>;

/// Step-pinning Ginzburg-Landau model on the unit disc: p = 1 for |x| <= R,
/// p = a for R < |x| <= 1, coherence length epsilon.
class PinningModel {
 public:
  PinningModel(double a, double R, double epsilon);

  double a() const noexcept { return a_; }
  double R() const noexcept { return R_; }
  double epsilon() const noexcept { return eps_; }
  double sqrt_a() const noexcept;
  /// min(1, sqrt a) and max(1, sqrt a): the band the pinned density lives in.
  double lower_level() const noexcept;
  double upper_level() const noexcept;
  /// |ln epsilon|
  double log_inv_eps() const noexcept;

 private:
  double a_;
  double R_;
  double eps_;
};

/// p(r); p(R) = 1 (the inner disc is closed).
double step_potential(const PinningModel& model, double r);

/// Strictly increasing radii from 0 to 1 containing R exactly once.
class RadialGrid {
 public:
  RadialGrid(std::vector<double> nodes, double R);

  std::size_t size() const noexcept { return r_.size(); }
  double operator[](std::size_t i) const { return r_[i]; }
  std::span<const double> nodes() const noexcept { return r_; }
  double R() const noexcept { return R_; }
  /// Index of the node sitting at r = R.
  std::size_t interface_index() const noexcept { return iR_; }

  /// Finite-volume geometry: face i sits between nodes i and i+1.
  double face(std::size_t i) const;
  double spacing(std::size_t i) const { return r_[i + 1] - r_[i]; }
  /// Area (including the 2 pi) of the annular control volume of node i,
  /// split into the parts with r <= R and r > R.
  double volume(std::size_t i) const { return vin_[i] + vout_[i]; }
  double volume_inner(std::size_t i) const { return vin_[i]; }
  double volume_outer(std::size_t i) const { return vout_[i]; }
  /// 2 pi r_{i+1/2} / (r_{i+1} - r_i)
  double face_weight(std::size_t i) const;
  std::size_t locate(double r) const;  // index of the control volume holding r

  bool same_nodes(const RadialGrid& other) const;

 private:
  std::vector<double> r_;
  double R_;
  std::size_t iR_ = 0;
  std::vector<double> vin_, vout_;
};

/// Grid with node density raised in an O(epsilon) layer around R.
RadialGrid graded_radial_grid(const PinningModel& model, std::size_t n);

/// Polar tensor mesh over the closed unit disc. Node 0 is the centre; ring i
/// (1 <= i < n_r) carries n_theta nodes at angles j * dtheta.
///
/// Edges: radial edge (i, j) joins ring i (or the centre when i == 0) to ring
/// i+1 along angle j; angular edge (i, j) joins (i, j) to (i, j+1) on ring i.
/// Cells: cell (i, j) is bounded by rings i, i+1 and angles j, j+1 (a
/// triangle with the centre when i == 0).
class DiscMesh {
 public:
  DiscMesh(RadialGrid radial, std::size_t n_theta);

  const RadialGrid& radial() const noexcept { return radial_; }
  std::size_t n_r() const noexcept { return radial_.size(); }
  std::size_t n_theta() const noexcept { return nt_; }
  double dtheta() const noexcept { return dth_; }

  std::size_t num_nodes() const noexcept { return 1 + (n_r() - 1) * nt_; }
  std::size_t num_radial_edges() const noexcept { return (n_r() - 1) * nt_; }
  std::size_t num_angular_edges() const noexcept { return (n_r() - 1) * nt_; }
  std::size_t num_cells() const noexcept { return (n_r() - 1) * nt_; }

  std::size_t node(std::size_t ring, std::size_t j) const {
    return ring == 0 ? 0 : 1 + (ring - 1) * nt_ + (j % nt_);
  }
  std::size_t ring_of(std::size_t node) const { return node == 0 ? 0 : 1 + (node - 1) / nt_; }
  std::size_t angle_of(std::size_t node) const { return node == 0 ? 0 : (node - 1) % nt_; }
  std::size_t radial_edge(std::size_t i, std::size_t j) const { return i * nt_ + j % nt_; }
  std::size_t angular_edge(std::size_t ring, std::size_t j) const { return (ring - 1) * nt_ + j % nt_; }
  std::size_t cell(std::size_t i, std::size_t j) const { return i * nt_ + j % nt_; }

  double x(std::size_t node) const;
  double y(std::size_t node) const;
  double r_of(std::size_t node) const { return radial_[ring_of(node)]; }
  double theta_of(std::size_t node) const { return static_cast<double>(angle_of(node)) * dth_; }

  /// Control-volume area of a node.
  double node_volume(std::size_t node) const;
  double node_volume_inner(std::size_t node) const;
  double node_volume_outer(std::size_t node) const;
  /// Dual-length / primal-length ratios of the two edge families.
  double radial_weight(std::size_t i) const;
  double angular_weight(std::size_t ring) const;
  double radial_length(std::size_t i) const { return radial_.spacing(i); }
  double angular_length(std::size_t ring) const { return radial_[ring] * dth_; }
  double cell_area(std::size_t i) const;

  /// Node whose control volume contains (x, y).
  std::size_t nearest_node(double x, double y) const;
  /// Sum of all cell areas (pi up to rounding).
  double total_area() const;

  /// Smallest radial spacing among nodes within `width` of R.
  double min_spacing_near(double r0, double width) const;

 private:
  RadialGrid radial_;
  std::size_t nt_;
  double dth_;
};

/// Inputs of a run read from a `key = value` file: a, R, epsilon, grid.n_r,
/// grid.n_theta.
struct ModelConfig {
  double a = 0.25;
  double R = 0.5;
  double epsilon = 0.05;
  std::size_t n_r = 192;
  std::size_t n_theta = 256;
};

ModelConfig read_model_config(const std::filesystem::path& path, ModelConfig defaults = {});

}  // namespace glpin
