#pragma once

#include <cstdint>
#include <vector>

#include "rlcert/env/discrete_model.hpp"
#include "rlcert/qfunc/q_function.hpp"

namespace rlcert {

/// Piecewise-constant Q-function on an axis-aligned cell grid. Per dimension,
/// `edges` holds the strictly increasing interior cell boundaries; the outer
/// cells extend to +-infinity, so every observation falls in exactly one cell.
/// Cells are closed on the left: obs lands in cell i when
/// edges[i-1] <= obs < edges[i].
class GridQ final : public QFunction {
 public:
  /// `table` is cell-major (row-major over the per-dimension cell indices)
  /// with the action index fastest.
  GridQ(std::vector<std::vector<double>> edges, std::vector<double> table,
        int num_actions);

  int obs_dim() const override { return static_cast<int>(edges_.size()); }
  int num_actions() const override { return num_actions_; }
  void eval_raw(std::span<const double> obs, std::span<double> out) const override;
  std::unique_ptr<QFunction> clone() const override;

  const std::vector<std::vector<double>>& edges() const { return edges_; }
  const std::vector<double>& table() const { return table_; }

  std::size_t num_cells() const { return num_cells_; }
  int cells_along(int dim) const { return static_cast<int>(edges_[dim].size()) + 1; }

  /// Flat cell index of an observation.
  std::size_t cell_of(std::span<const double> obs) const;

  /// Copy with every table entry clipped to [v_min, v_max].
  GridQ clipped(double v_min, double v_max) const;

 private:
  std::vector<std::vector<double>> edges_;
  std::vector<double> table_;
  int num_actions_;
  std::size_t num_cells_;
};

/// Assembles a GridQ over the model's cell grid from a value-iteration table
/// laid out as state-major, action fastest.
GridQ make_grid_q(const DiscreteModel& model, const std::vector<double>& qtable);

}  // namespace rlcert
