#include "glpin/polar_solver.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>

#include "glpin/errors.hpp"
#include "glpin/numerics.hpp"

namespace glpin {

struct PolarSolver::Plan {
  int nt;
  double* real;
  fftw_complex* spectrum;
  fftw_plan fwd, bwd;
  explicit Plan(int n) : nt(n) {
    real = fftw_alloc_real(static_cast<std::size_t>(n));
    spectrum = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
    fwd = fftw_plan_dft_r2c_1d(n, real, spectrum, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(n, spectrum, real, FFTW_ESTIMATE);
  }
  ~Plan() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(real);
    fftw_free(spectrum);
  }
};

PolarSolver::PolarSolver(const DiscMesh& mesh, std::vector<double> radial, std::vector<double> angular,
                         std::vector<double> mass, Boundary bc)
    : mesh_(mesh), kr_(std::move(radial)), ka_(std::move(angular)), mass_(std::move(mass)), bc_(bc),
      plan_(std::make_unique<Plan>(static_cast<int>(mesh.n_theta()))) {
  const std::size_t nr = mesh.n_r();
  if (kr_.size() != nr - 1 || ka_.size() != nr || mass_.size() != nr)
    throw MeshMismatchError("PolarSolver: coefficient arrays do not match the mesh");
}

PolarSolver::~PolarSolver() = default;

std::vector<double> PolarSolver::solve(std::span<const double> f) const {
  const std::size_t nr = mesh_.n_r(), nt = mesh_.n_theta(), nm = nt / 2 + 1;
  if (f.size() != mesh_.num_nodes()) throw MeshMismatchError("PolarSolver::solve: load size");
  const bool dirichlet = bc_ == Boundary::Dirichlet;
  const std::size_t last = dirichlet ? nr - 2 : nr - 1;  // last unknown ring
  bool pin = !dirichlet;
  for (double m : mass_)
    if (m != 0.0) pin = false;

  // forward transforms, ring-major
  std::vector<cplx> fh((nr - 1) * nm);
  for (std::size_t i = 1; i < nr; ++i) {
    for (std::size_t j = 0; j < nt; ++j) plan_->real[j] = f[mesh_.node(i, j)];
    fftw_execute(plan_->fwd);
    for (std::size_t m = 0; m < nm; ++m) fh[(i - 1) * nm + m] = {plan_->spectrum[m][0], plan_->spectrum[m][1]};
  }

  std::vector<cplx> gh((nr - 1) * nm, 0.0);
  double g0 = 0.0;
  const double dth = mesh_.dtheta();
  const auto ntd = static_cast<double>(nt);
  for (std::size_t m = 0; m < nm; ++m) {
    const double lam = 2.0 - 2.0 * std::cos(dth * static_cast<double>(m));
    const bool centre = m == 0;
    const std::size_t off = centre ? 0 : 1;  // row k <-> ring k + off
    const std::size_t n = last + 1 - off;
    std::vector<double> lo(n, 0.0), di(n, 0.0), up(n, 0.0);
    std::vector<cplx> rhs(n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = k + off;
      if (i == 0) {
        if (pin) {
          di[k] = 1.0;
          rhs[k] = 0.0;
        } else {
          di[k] = ntd * kr_[0] + mass_[0];
          up[k] = -kr_[0];
          rhs[k] = f[0];
        }
        continue;
      }
      di[k] = kr_[i - 1] + (i + 1 < nr ? kr_[i] : 0.0) + ka_[i] * lam + mass_[i];
      if (k > 0) lo[k] = (i == 1) ? (pin ? 0.0 : -ntd * kr_[0]) : -kr_[i - 1];
      if (k + 1 < n) up[k] = -kr_[i];
      rhs[k] = fh[(i - 1) * nm + m];
    }
    const auto sol = numerics::solve_tridiagonal<cplx>(lo, di, up, rhs);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = k + off;
      if (i == 0)
        g0 = sol[k].real();
      else
        gh[(i - 1) * nm + m] = sol[k];
    }
  }

  std::vector<double> g(mesh_.num_nodes(), 0.0);
  g[0] = g0;
  for (std::size_t i = 1; i <= last; ++i) {
    for (std::size_t m = 0; m < nm; ++m) {
      plan_->spectrum[m][0] = gh[(i - 1) * nm + m].real();
      plan_->spectrum[m][1] = gh[(i - 1) * nm + m].imag();
    }
    fftw_execute(plan_->bwd);
    for (std::size_t j = 0; j < nt; ++j) g[mesh_.node(i, j)] = plan_->real[j] / ntd;
  }
  return g;
}

std::vector<double> PolarSolver::apply(std::span<const double> g) const {
  const std::size_t nr = mesh_.n_r(), nt = mesh_.n_theta();
  std::vector<double> out(mesh_.num_nodes(), 0.0);
  out[0] = mass_[0] * g[0];
  for (std::size_t i = 1; i < nr; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t n = mesh_.node(i, j);
      out[n] += mass_[i] * g[n];
      const std::size_t in = mesh_.node(i - 1, j);
      const double fr = kr_[i - 1] * (g[n] - g[in]);
      out[n] += fr;
      out[in] -= fr;
      const std::size_t nx = mesh_.node(i, j + 1);
      const double fa = ka_[i] * (g[n] - g[nx]);
      out[n] += fa;
      out[nx] -= fa;
    }
  }
  return out;
}

}  // namespace glpin
