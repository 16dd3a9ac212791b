#pragma once

#include <vector>

#include "rlcert/env/grid_world.hpp"
#include "rlcert/env/toy_freeway.hpp"

namespace rlcert {

/// Finite deterministic MDP together with the observation-space cell grid its
/// states live on. Produced by the exact discretizers below and consumed by
/// value iteration; the cell grid lets the resulting table be evaluated as a
/// piecewise-constant function of the continuous observation.
struct DiscreteModel {
  struct Outcome {
    int next_state;
    double reward;
    bool terminal;
  };

  int num_states = 0;
  int num_actions = 0;
  std::vector<Outcome> outcomes;  // num_states * num_actions, action-major within state

  // Observation-space geometry: interior cell edges per dimension (outer
  // cells extend to +-infinity) and, per state, the cell multi-index.
  std::vector<std::vector<double>> cell_edges;
  std::vector<std::vector<int>> state_cells;

  const Outcome& outcome(int state, int action) const {
    return outcomes[static_cast<std::size_t>(state) * num_actions + action];
  }
};

/// Exact one-cell-per-grid-cell model of a GridWorld.
DiscreteModel discretize(const GridWorld& env);

/// Exact model of a ToyFreeway over the full (row, car positions) product
/// space.
DiscreteModel discretize(const ToyFreeway& env);

}  // namespace rlcert
