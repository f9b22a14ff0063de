#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace glpin {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid parameters, grids or run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// a == 1: the step potential is flat and the interface problem is trivial.
class DegenerateModelError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class MeshMismatchError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// A numerical solver failed to converge. Carries the last residual.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A computed result violates a contract it is required to satisfy.
class PostconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotApplicableError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class SingularInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Winding degree requested on a curve where the field (nearly) vanishes.
class UndefinedDegreeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested site count does not fit on the circle.
class TooManySitesError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// The critical-field sweep saw no 0 -> nonzero degree transition.
class OutOfRangeError : public std::runtime_error {
 public:
  OutOfRangeError(const std::string& what, std::vector<int> profile)
      : std::runtime_error(what), degree_profile(std::move(profile)) {}
  std::vector<int> degree_profile;
};

}  // namespace glpin
