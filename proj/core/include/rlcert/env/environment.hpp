#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace rlcert {

using Observation = std::vector<double>;

/// Static description of an environment: dimensions, horizon, and the value
/// ranges the reward certifiers need.
struct EnvSpec {
  int obs_dim = 0;
  int num_actions = 0;
  int horizon = 0;
  double discount = 1.0;
  double reward_min = 0.0;
  double reward_max = 0.0;
  double return_min = 0.0;
  double return_max = 0.0;
  bool reward_nonnegative = false;
  std::vector<std::pair<double, double>> obs_box;  // per-dimension (low, high)

  /// Throws DomainError if the declared ranges are inconsistent.
  void validate() const;
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;
};

/// Restorable capture of the full environment state. `key` is a canonical
/// string of the minimal dynamical state: two snapshots with equal key are
/// behaviorally identical, so search code can memoize on it directly.
struct EnvSnapshot {
  std::string payload;
  std::string key;
};

/// Deterministic environment with snapshot/restore. Instances are
/// single-threaded mutable objects; clone() yields an independent copy for
/// worker threads.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual const EnvSpec& spec() const = 0;
  virtual std::string name() const = 0;

  /// Moves to a seed-determined initial state. Same seed, same state.
  virtual Observation reset(std::uint64_t seed) = 0;

  /// Advances one step. Throws UsageError if the episode is done or the
  /// action index is out of range.
  virtual StepResult step(int action) = 0;

  virtual Observation observation() const = 0;

  virtual EnvSnapshot snapshot() const = 0;

  /// Throws FormatError when the payload was not produced by this
  /// environment type.
  virtual void restore(const EnvSnapshot& s) = 0;

  virtual std::unique_ptr<Environment> clone() const = 0;
};

}  // namespace rlcert
