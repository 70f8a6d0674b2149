#pragma once

#include <stdexcept>
#include <string>

namespace savns {

/// Invalid grid, mismatched fields, or an inconsistent configuration value.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A linear solver stopped before reaching its residual target.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// The scalar linear equation for the auxiliary variable has a vanishing
/// coefficient.
class DegenerateQError : public std::runtime_error {
 public:
  DegenerateQError(const std::string& what, double denominator)
      : std::runtime_error(what), denominator_(denominator) {}
  double denominator() const { return denominator_; }

 private:
  double denominator_;
};

}  // namespace savns
