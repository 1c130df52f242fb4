#pragma once

#include <stdexcept>
#include <string>

namespace hyplab {

/// Raised when a caller breaks an operation's precondition
/// (mismatched base points, negative radius, zero direction, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A verification harness was configured inconsistently (e.g. boundary data
/// of a comparison pair is not ordered, or a translate has empty overlap).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The flux law cannot carry the flux the boundary data demands
/// (minimal-surface gradient blow-up). `radius` is where it first happens.
class NoSolution : public std::runtime_error {
 public:
  NoSolution(const std::string& what, double radius)
      : std::runtime_error(what), radius_(radius) {}
  double radius() const noexcept { return radius_; }

 private:
  double radius_;
};

class NotConverged : public std::runtime_error {
 public:
  NotConverged(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

}  // namespace hyplab
