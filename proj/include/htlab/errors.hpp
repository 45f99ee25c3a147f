#pragma once

#include <stdexcept>
#include <string>

namespace htlab {

// Quadrature ran out of its evaluation budget; carries the best estimate so
// callers can decide whether it is still usable.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double best_estimate,
                  double error_estimate)
      : std::runtime_error(what),
        best_estimate(best_estimate),
        error_estimate(error_estimate) {}
  double best_estimate;
  double error_estimate;
};

// A payoff on the global maximum whose expectation diverges (the call-type
// case); first-class signal rather than a NaN.
class InfiniteExpectationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A path was not simulated far enough for the requested tail bound: the
// conditional probability of a future new extremum still exceeds epsilon.
class TailBoundError : public std::runtime_error {
 public:
  TailBoundError(const std::string& what, double z_terminal, double epsilon)
      : std::runtime_error(what), z_terminal(z_terminal), epsilon(epsilon) {}
  double z_terminal;
  double epsilon;
};

// A market configuration violated one of the structural assumptions.
class AssumptionViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace htlab
