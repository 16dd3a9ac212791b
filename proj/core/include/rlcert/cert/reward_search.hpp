#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "rlcert/env/environment.hpp"
#include "rlcert/errors.hpp"
#include "rlcert/smoothing/backend.hpp"

namespace rlcert {

/// Which actions a perturbation of magnitude eps can force at a state whose
/// extended radii are given. An action of rank k (0-based, rank 0 = the
/// smoothed policy's choice) is possible once eps >= radii[k]; the boundary is
/// closed because the radius only excludes strictly smaller perturbations.
struct PossibleActions {
  std::vector<int> possible;                       // action indices, rank order
  std::vector<std::pair<double, int>> next_critical;  // (radius, action) with radius > eps
};

/// `order` is the action ranking matching `radii` (radii[k] belongs to
/// order[k]); radii must be non-decreasing with radii[0] == 0.
PossibleActions get_actions(const std::vector<double>& radii,
                            const std::vector<int>& order, double eps);

struct SearchStats {
  std::size_t nodes_expanded = 0;
  std::size_t memo_hits = 0;
  std::size_t attacked_state_count = 0;  // distinct states ever seen with >1 possible action
  double confidence = 1.0;               // (1-alpha)^attacked_state_count
  double benign_return = 0.0;
  double eps_covered = 0.0;
  bool complete = true;
  std::vector<double> critical_eps;  // every distinct magnitude the search expanded at
};

/// Sorted collection {(eps_i, lower_bound_i)}: for eps_i <= eps' < eps_{i+1},
/// every attack of per-step magnitude at most eps' leaves the smoothed
/// policy's return at or above lower_bound_i.
struct RewardCertificate {
  std::vector<std::pair<double, double>> entries;
  SearchStats stats;

  /// Bound applicable at magnitude eps (largest entry with eps_i <= eps).
  double bound_at(double eps) const;
};

struct RewardSearchOptions {
  double eps_max = 1.0;
  double gamma = 1.0;
  bool enable_pruning = false;  // requires a reward-nonnegative environment
  bool use_memo = true;
  std::size_t max_nodes = 2000000;
  double max_seconds = std::numeric_limits<double>::infinity();
};

/// Thrown when the node or time budget runs out; carries the entries that
/// were fully certified before the interrupt (sound for eps < eps_covered).
class PartialResultError : public Error {
 public:
  PartialResultError(const std::string& msg, RewardCertificate partial)
      : Error(msg), certificate(std::move(partial)) {}
  RewardCertificate certificate;
};

/// Adaptive trajectory-tree search from the environment's current state:
/// expands, in ascending order of critical radius, every action the extended
/// radii admit at each visited state, and records the running minimum return
/// after each distinct critical magnitude. Smoothed estimates are computed
/// once per distinct environment state (noise stream keyed by the state key)
/// and memoized.
RewardCertificate certify_reward_search(Environment& env,
                                        const SmoothingBackend& backend, int horizon,
                                        const RewardSearchOptions& opts);

/// Test oracle: plain recursive enumeration of every trajectory whose
/// per-step actions are possible under eps, with no queue, no pruning and no
/// memoization; returns the minimum return. Throws ResourceError beyond the
/// enumeration cap.
double brute_force_lower_bound(Environment& env, const SmoothingBackend& backend,
                               int horizon, double eps, double gamma,
                               std::size_t max_nodes = 5000000);

/// Confidence that every estimate-derived radius used by the search holds:
/// (1-alpha)^attacked_states.
double search_confidence(std::size_t attacked_states, double alpha);

/// Noise stream for smoothing at a given environment state; shared by the
/// search and the oracle so both see identical Monte Carlo estimates.
std::uint64_t state_noise_stream(const std::string& state_key);

}  // namespace rlcert
