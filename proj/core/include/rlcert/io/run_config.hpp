#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rlcert/env/environment.hpp"
#include "rlcert/qfunc/q_function.hpp"

namespace rlcert {

enum class RunMode {
  kCertifyAction,
  kCertifyRewardGlobal,
  kCertifyRewardLocal,
  kAttack,
};

std::string to_string(RunMode mode);

/// Parsed, schema-checked run configuration. Unknown keys anywhere in the
/// document are rejected with the offending path in the message.
struct RunConfig {
  // env
  std::string env_name;
  int env_width = 5, env_height = 5, env_goal_x = 4, env_goal_y = 4;  // gridworld
  int env_lanes = 2, env_road_width = 5;                              // toy_freeway
  std::uint64_t env_seed = 0;

  // q source
  bool q_from_weights = false;
  std::string q_weights_path;
  double q_gamma = 0.9;
  double q_tol = 1e-10;

  // smoothing
  std::vector<double> sigmas{0.1};
  std::size_t m = 10000;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  bool exact_backend = false;
  bool explicit_range = false;
  double v_min = 0.0, v_max = 1.0;
  int range_episodes = 10;

  int horizon = 0;  // 0: use the environment default
  double gamma = 1.0;

  RunMode mode = RunMode::kCertifyAction;

  // certify-action
  int action_episodes = 1;

  // certify-reward-global
  std::vector<double> eps_grid{0.0, 0.05, 0.1, 0.2};
  double percentile = 0.5;
  bool order_stats_normal = false;

  // certify-reward-local
  double eps_max = 0.5;
  bool pruning = true;
  std::size_t max_nodes = 2000000;
  double max_seconds = 0.0;  // 0: unlimited

  // attack
  std::string attack_method = "random";  // random | pgd | randomized-policy
  int attack_steps = 10;
  int attack_trials = 64;
  std::string attack_target = "smoothed";
  int attack_episodes = 5;

  std::string output = "run";

  /// Hash of the canonical resolved document; stable across reruns.
  std::string config_hash() const;
  std::string resolved_json() const;

  std::unique_ptr<Environment> make_env() const;
};

RunConfig parse_run_config_text(const std::string& text);
RunConfig load_run_config(const std::string& path);

}  // namespace rlcert
