#pragma once

#include <vector>

#include "rlcert/env/discrete_model.hpp"

namespace rlcert {

struct ValueIterationOptions {
  double tol = 1e-10;
  int max_iterations = 200000;
};

/// Solves the finite deterministic MDP by value iteration. The returned table
/// is state-major with the action index fastest and has sup-norm Bellman
/// residual <= tol. Throws ConvergenceError when the iteration cap is hit
/// first.
std::vector<double> value_iteration(const DiscreteModel& model, double gamma,
                                    const ValueIterationOptions& opts = {});

/// Sup-norm Bellman residual of a table against the model, for verification.
double bellman_residual(const DiscreteModel& model, double gamma,
                        const std::vector<double>& qtable);

}  // namespace rlcert
