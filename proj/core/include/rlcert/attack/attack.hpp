#pragma once

#include <cstdint>

#include "rlcert/env/environment.hpp"
#include "rlcert/qfunc/mlp_q.hpp"
#include "rlcert/smoothing/backend.hpp"

namespace rlcert {

enum class AttackTarget { kSmoothed, kRaw };

struct AttackConfig {
  double epsilon = 0.0;  // per-step l2 budget
  int steps = 10;        // PGD iterations
  int trials = 64;       // random-direction candidates
  AttackTarget target = AttackTarget::kSmoothed;
  std::uint64_t seed = 0;
  std::size_t score_m = 256;  // Monte Carlo budget for candidate scoring
  int eot_samples = 32;       // noise draws per gradient when attacking the smoothed policy
};

/// Per-step l2 norms of the perturbations an attack actually emitted.
struct AttackTrace {
  std::vector<double> delta_norms;
};

/// Per-step projected gradient ascent on the margin between the strongest
/// alternative and the victim's action, w.r.t. the observation, projected
/// onto the epsilon-ball after each iteration. Runs an episode from the
/// environment's current state and returns the gamma-discounted return of the
/// attacked rollout. Requires a differentiable Q-function.
double pgd_attack_episode(Environment& env, const MlpQ& q, const AttackConfig& attack,
                          const SmoothingBackend& backend, int horizon,
                          double gamma = 1.0, AttackTrace* trace = nullptr);

/// Gradient-free attack for arbitrary Q-functions: per step, samples `trials`
/// directions uniformly on the epsilon-sphere (plus the zero vector) and keeps
/// the candidate that most erodes the victim policy's margin.
double random_attack_episode(Environment& env, const AttackConfig& attack,
                             const SmoothingBackend& backend, int horizon,
                             double gamma = 1.0, AttackTrace* trace = nullptr);

/// Attack protocol against the noise-randomized policy: the adversary picks a
/// perturbation from the true state (it cannot see the policy's fresh noise
/// draw), then the greedy policy of q acts on state + perturbation + noise.
/// `rollout` selects the policy noise stream.
double attacked_randomized_episode(Environment& env, const QFunction& q, double sigma,
                                   const AttackConfig& attack, int horizon,
                                   double gamma, std::uint64_t rollout);

}  // namespace rlcert
