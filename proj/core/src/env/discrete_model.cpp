#include "rlcert/env/discrete_model.hpp"

namespace rlcert {

DiscreteModel discretize(const GridWorld& env) {
  const auto& p = env.params();
  DiscreteModel model;
  model.num_states = p.width * p.height;
  model.num_actions = 4;
  model.outcomes.resize(static_cast<std::size_t>(model.num_states) * 4);

  model.cell_edges.resize(2);
  for (int e = 1; e < p.width; ++e) model.cell_edges[0].push_back(e);
  for (int e = 1; e < p.height; ++e) model.cell_edges[1].push_back(e);

  model.state_cells.resize(model.num_states);
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      const int s = y * p.width + x;
      model.state_cells[s] = {x, y};
      for (int a = 0; a < 4; ++a) {
        const auto t = GridWorld::apply(p, x, y, a);
        model.outcomes[static_cast<std::size_t>(s) * 4 + a] =
            DiscreteModel::Outcome{t.y * p.width + t.x, t.reward, t.done};
      }
    }
  }
  return model;
}

DiscreteModel discretize(const ToyFreeway& env) {
  const auto& p = env.params();
  const int rows = p.lanes + 2;
  int num_states = rows;
  for (int l = 0; l < p.lanes; ++l) num_states *= p.width;

  DiscreteModel model;
  model.num_states = num_states;
  model.num_actions = 3;
  model.outcomes.resize(static_cast<std::size_t>(num_states) * 3);

  model.cell_edges.resize(1 + p.lanes);
  for (int e = 1; e < rows; ++e) model.cell_edges[0].push_back(e - 0.5);
  for (int l = 0; l < p.lanes; ++l) {
    for (int e = 1; e < p.width; ++e) model.cell_edges[1 + l].push_back(e - 0.5);
  }

  // State index: row-major over (row, car_0, ..., car_{lanes-1}), cars fastest.
  auto encode = [&](const ToyFreeway::State& s) {
    int idx = s.row;
    for (int l = 0; l < p.lanes; ++l) idx = idx * p.width + s.cars[l];
    return idx;
  };

  model.state_cells.resize(num_states);
  ToyFreeway::State s;
  s.cars.assign(p.lanes, 0);
  for (int row = 0; row < rows; ++row) {
    s.row = row;
    std::fill(s.cars.begin(), s.cars.end(), 0);
    while (true) {
      const int idx = encode(s);
      auto& cell = model.state_cells[idx];
      cell.assign(1 + p.lanes, 0);
      cell[0] = row;
      for (int l = 0; l < p.lanes; ++l) cell[1 + l] = s.cars[l];
      for (int a = 0; a < 3; ++a) {
        const auto t = ToyFreeway::apply(p, s, a);
        model.outcomes[static_cast<std::size_t>(idx) * 3 + a] =
            DiscreteModel::Outcome{encode(t.state), t.reward, false};
      }
      // Advance the car-position odometer.
      int l = p.lanes - 1;
      for (; l >= 0; --l) {
        if (++s.cars[l] < p.width) break;
        s.cars[l] = 0;
      }
      if (l < 0) break;
    }
  }
  return model;
}

}  // namespace rlcert
