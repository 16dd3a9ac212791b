#pragma once

#include <memory>
#include <span>
#include <vector>

namespace rlcert {

/// Q-values for one observation, already clipped when produced under a
/// smoothing config.
struct QValues {
  std::vector<double> values;
};

/// Immutable action-value function. Implementations must be safe for
/// concurrent read access.
class QFunction {
 public:
  virtual ~QFunction() = default;

  virtual int obs_dim() const = 0;
  virtual int num_actions() const = 0;

  /// Raw (unclipped) values. `out` must have num_actions() entries.
  virtual void eval_raw(std::span<const double> obs, std::span<double> out) const = 0;

  virtual std::unique_ptr<QFunction> clone() const = 0;

  /// Values clipped to [v_min, v_max]. Throws DomainError on NaN input or an
  /// inverted clip range.
  QValues eval(std::span<const double> obs, double v_min, double v_max) const;

  /// Greedy action on raw values, lowest index among ties.
  int greedy_action(std::span<const double> obs) const;
};

}  // namespace rlcert
