#include "rlcert/qfunc/grid_q.hpp"

#include <algorithm>
#include <cmath>

#include "rlcert/errors.hpp"

namespace rlcert {

QValues QFunction::eval(std::span<const double> obs, double v_min, double v_max) const {
  if (v_min > v_max) throw DomainError("eval: v_min > v_max");
  for (double v : obs) {
    if (std::isnan(v)) throw DomainError("eval: NaN in observation");
  }
  QValues q;
  q.values.resize(static_cast<std::size_t>(num_actions()));
  eval_raw(obs, q.values);
  for (double& v : q.values) v = std::clamp(v, v_min, v_max);
  return q;
}

int QFunction::greedy_action(std::span<const double> obs) const {
  std::vector<double> v(static_cast<std::size_t>(num_actions()));
  eval_raw(obs, v);
  int best = 0;
  for (int a = 1; a < num_actions(); ++a) {
    if (v[a] > v[best]) best = a;
  }
  return best;
}

GridQ::GridQ(std::vector<std::vector<double>> edges, std::vector<double> table,
             int num_actions)
    : edges_(std::move(edges)), table_(std::move(table)), num_actions_(num_actions) {
  if (num_actions_ < 1) throw DomainError("GridQ: need at least one action");
  if (edges_.empty()) throw DomainError("GridQ: need at least one dimension");
  num_cells_ = 1;
  for (const auto& e : edges_) {
    for (std::size_t i = 0; i + 1 < e.size(); ++i) {
      if (!(e[i] < e[i + 1])) throw DomainError("GridQ: edges must be strictly increasing");
    }
    for (double v : e) {
      if (!std::isfinite(v)) throw DomainError("GridQ: edges must be finite");
    }
    num_cells_ *= e.size() + 1;
  }
  if (table_.size() != num_cells_ * static_cast<std::size_t>(num_actions_)) {
    throw DomainError("GridQ: table size does not match cell grid");
  }
  for (double v : table_) {
    if (!std::isfinite(v)) throw DomainError("GridQ: table values must be finite");
  }
}

std::size_t GridQ::cell_of(std::span<const double> obs) const {
  std::size_t idx = 0;
  for (std::size_t d = 0; d < edges_.size(); ++d) {
    const auto& e = edges_[d];
    const auto it = std::upper_bound(e.begin(), e.end(), obs[d]);
    idx = idx * (e.size() + 1) + static_cast<std::size_t>(it - e.begin());
  }
  return idx;
}

void GridQ::eval_raw(std::span<const double> obs, std::span<double> out) const {
  if (obs.size() != edges_.size()) throw DomainError("GridQ: observation dimension mismatch");
  const std::size_t base = cell_of(obs) * static_cast<std::size_t>(num_actions_);
  for (int a = 0; a < num_actions_; ++a) out[a] = table_[base + a];
}

std::unique_ptr<QFunction> GridQ::clone() const { return std::make_unique<GridQ>(*this); }

GridQ GridQ::clipped(double v_min, double v_max) const {
  if (v_min > v_max) throw DomainError("GridQ::clipped: v_min > v_max");
  std::vector<double> t = table_;
  for (double& v : t) v = std::clamp(v, v_min, v_max);
  return GridQ(edges_, std::move(t), num_actions_);
}

GridQ make_grid_q(const DiscreteModel& model, const std::vector<double>& qtable) {
  if (qtable.size() !=
      static_cast<std::size_t>(model.num_states) * model.num_actions) {
    throw DomainError("make_grid_q: table size does not match the model");
  }
  std::size_t num_cells = 1;
  for (const auto& e : model.cell_edges) num_cells *= e.size() + 1;
  std::vector<double> table(num_cells * static_cast<std::size_t>(model.num_actions), 0.0);
  for (int s = 0; s < model.num_states; ++s) {
    std::size_t cell = 0;
    for (std::size_t d = 0; d < model.cell_edges.size(); ++d) {
      cell = cell * (model.cell_edges[d].size() + 1) +
             static_cast<std::size_t>(model.state_cells[s][d]);
    }
    for (int a = 0; a < model.num_actions; ++a) {
      table[cell * model.num_actions + a] =
          qtable[static_cast<std::size_t>(s) * model.num_actions + a];
    }
  }
  return GridQ(model.cell_edges, std::move(table), model.num_actions);
}

}  // namespace rlcert
