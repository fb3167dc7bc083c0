#pragma once

#include <stdexcept>
#include <string>

namespace heis {

/// Operands live in Heisenberg groups of different index n.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Evaluation requested at the pole of a map or kernel.
struct PoleError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Operation undefined on or too close to the characteristic set (|z| ~ 0).
struct CharacteristicError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Rejection sampler exhausted its attempt budget.
struct SamplingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Monte Carlo budget cannot reach the requested accuracy.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested evaluation needs finer grid or cloud resolution.
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Hypotheses of a theorem-check configuration are violated.
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Iterative solver failed to converge; carries the residual history tail.
struct SolverError : std::runtime_error {
  SolverError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

}  // namespace heis
