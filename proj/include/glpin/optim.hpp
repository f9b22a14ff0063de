#pragma once

#include <functional>
#include <span>
#include <vector>

namespace glpin {

/// f(x, grad) -> value; must fill grad.
using Objective = std::function<double(std::span<const double>, std::span<double>)>;

struct LbfgsOptions {
  int max_iterations = 1000;
  int memory = 8;
  double gradient_tolerance = 0.0;  // on the preconditioned gradient norm
  int max_backtracks = 40;
  double armijo = 1e-4;
};

struct LbfgsResult {
  double value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool gradient_converged = false;
  bool stalled = false;  // no decreasing step found
};

/// Limited-memory BFGS with Armijo backtracking. `inv_diag` (may be empty) is
/// a diagonal preconditioner used as the initial inverse Hessian. Accepted
/// steps never increase f.
LbfgsResult lbfgs(const Objective& f, std::vector<double>& x, std::span<const double> inv_diag,
                  const LbfgsOptions& opts);

}  // namespace glpin
