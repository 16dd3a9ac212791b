#include "rlcert/qfunc/value_iteration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rlcert/errors.hpp"

namespace rlcert {

namespace {

double apply_bellman(const DiscreteModel& model, double gamma,
                     const std::vector<double>& q, std::vector<double>& out) {
  double residual = 0.0;
  for (int s = 0; s < model.num_states; ++s) {
    for (int a = 0; a < model.num_actions; ++a) {
      const auto& o = model.outcome(s, a);
      double target = o.reward;
      if (!o.terminal) {
        const std::size_t base =
            static_cast<std::size_t>(o.next_state) * model.num_actions;
        double best = q[base];
        for (int b = 1; b < model.num_actions; ++b) best = std::max(best, q[base + b]);
        target += gamma * best;
      }
      const std::size_t idx = static_cast<std::size_t>(s) * model.num_actions + a;
      residual = std::max(residual, std::abs(target - q[idx]));
      out[idx] = target;
    }
  }
  return residual;
}

}  // namespace

std::vector<double> value_iteration(const DiscreteModel& model, double gamma,
                                    const ValueIterationOptions& opts) {
  if (!(opts.tol > 0.0)) throw DomainError("value_iteration: tol must be positive");
  if (gamma < 0.0 || gamma > 1.0) {
    throw DomainError("value_iteration: gamma must lie in [0,1]");
  }
  std::vector<double> q(static_cast<std::size_t>(model.num_states) * model.num_actions,
                        0.0);
  std::vector<double> next(q.size(), 0.0);
  for (int it = 0; it < opts.max_iterations; ++it) {
    const double residual = apply_bellman(model, gamma, q, next);
    q.swap(next);
    if (residual <= opts.tol) return q;
  }
  throw ConvergenceError("value_iteration: residual above " + std::to_string(opts.tol) +
                         " after " + std::to_string(opts.max_iterations) +
                         " iterations");
}

double bellman_residual(const DiscreteModel& model, double gamma,
                        const std::vector<double>& qtable) {
  std::vector<double> scratch(qtable.size(), 0.0);
  return apply_bellman(model, gamma, qtable, scratch);
}

}  // namespace rlcert
