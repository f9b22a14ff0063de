#pragma once

#include <memory>
#include <span>
#include <vector>

#include "glpin/model.hpp"

namespace glpin {

/// Solver for the rotation-invariant nodal operator on a DiscMesh
///
///   (K g)_n = sum_{edges n~m} kappa_e (g_n - g_m) + mass_n g_n,
///
/// where kappa and mass depend only on the ring. A real FFT in theta splits
/// the system into one tridiagonal solve per angular mode.
class PolarSolver {
 public:
  enum class Boundary {
    Dirichlet,  // g = 0 on the outer ring
    Neumann,    // natural condition; the centre value is pinned to 0
  };

  /// radial[i]: coefficient of radial edges between rings i and i+1
  /// (i = 0 is the centre spoke); angular[i]: coefficient of angular edges on
  /// ring i (entry 0 unused); mass[i]: per-node mass on ring i.
  PolarSolver(const DiscMesh& mesh, std::vector<double> radial, std::vector<double> angular,
              std::vector<double> mass, Boundary bc);
  ~PolarSolver();
  PolarSolver(const PolarSolver&) = delete;
  PolarSolver& operator=(const PolarSolver&) = delete;

  /// Solves K g = f for nodal loads f (Dirichlet rows are replaced by g = 0).
  /// Not reentrant: the FFT buffers are shared.
  std::vector<double> solve(std::span<const double> f) const;
  /// K g without boundary modification.
  std::vector<double> apply(std::span<const double> g) const;

 private:
  DiscMesh mesh_;
  std::vector<double> kr_, ka_, mass_;
  Boundary bc_;
  struct Plan;
  std::unique_ptr<Plan> plan_;
};

}  // namespace glpin
