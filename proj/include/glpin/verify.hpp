#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace glpin {

struct Check {
  std::string module;
  std::string name;
  bool passed = false;
  double value = 0.0;  // measured quantity
  double bound = 0.0;  // threshold it was compared with
};

struct VerifyOptions {
  double epsilon = 0.05;
  std::size_t n_r = 192;
  std::size_t n_theta = 256;
  int max_iterations = 3000;  // for the vortex-free minimization
};

/// Invariants of every module on the model pair a = 0.25 and a = 4.
std::vector<Check> verify_invariants(const VerifyOptions& opts = {});

}  // namespace glpin
