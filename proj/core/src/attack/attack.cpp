#include "rlcert/attack/attack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rlcert/cert/reward_search.hpp"
#include "rlcert/errors.hpp"
#include "rlcert/noise.hpp"

namespace rlcert {

namespace {

double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void project_to_ball(std::vector<double>& delta, double eps) {
  const double norm = l2_norm(delta);
  if (norm > eps) {
    const double scale = eps / norm;
    for (double& x : delta) x *= scale;
  }
}

/// Margin of the victim's action over the best alternative; negative means
/// the action has flipped.
double margin_of(const std::vector<double>& values, int victim) {
  double best_other = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < values.size(); ++a) {
    if (static_cast<int>(a) == victim) continue;
    best_other = std::max(best_other, values[a]);
  }
  return values[victim] - best_other;
}

int argmax_excluding(const std::vector<double>& values, int excluded) {
  int best = excluded == 0 ? 1 : 0;
  for (std::size_t a = 0; a < values.size(); ++a) {
    if (static_cast<int>(a) == excluded) continue;
    if (values[a] > values[best]) best = static_cast<int>(a);
  }
  return best;
}

int victim_action(const SmoothingBackend& backend, const AttackConfig& attack,
                  const Observation& obs, std::uint64_t stream) {
  if (attack.target == AttackTarget::kSmoothed) {
    return backend.estimate(obs, stream).top_action;
  }
  return backend.q().greedy_action(obs);
}

/// Cheap scoring values for candidate selection.
std::vector<double> score_values(const SmoothingBackend& backend,
                                 const AttackConfig& attack, const Observation& obs,
                                 std::uint64_t stream) {
  const QFunction& q = backend.q();
  std::vector<double> values(static_cast<std::size_t>(q.num_actions()));
  if (attack.target == AttackTarget::kRaw) {
    q.eval_raw(obs, values);
    return values;
  }
  SmoothingConfig cfg = backend.config();
  cfg.m = std::max<std::size_t>(2, attack.score_m);
  return smooth_q_mc(q, obs, cfg, stream).mean;
}

}  // namespace

double pgd_attack_episode(Environment& env, const MlpQ& q, const AttackConfig& attack,
                          const SmoothingBackend& backend, int horizon, double gamma,
                          AttackTrace* trace) {
  if (attack.steps < 1) throw DomainError("pgd_attack_episode: steps must be >= 1");
  if (attack.epsilon < 0.0) throw DomainError("pgd_attack_episode: epsilon must be >= 0");

  const CounterRng eot_rng{mix64(attack.seed ^ 0x70d5u)};
  const double sigma = backend.config().sigma;
  const int dim = q.obs_dim();
  const int num_actions = q.num_actions();

  double ret = 0.0;
  double discount = 1.0;
  Observation obs = env.observation();
  for (int t = 0; t < horizon; ++t) {
    const std::uint64_t stream = state_noise_stream(env.snapshot().key);
    const int victim = victim_action(backend, attack, obs, stream);

    std::vector<double> delta(static_cast<std::size_t>(dim), 0.0);
    if (attack.epsilon > 0.0) {
      const double step_size = 2.0 * attack.epsilon / attack.steps;
      std::vector<double> perturbed(obs.size());
      std::vector<double> values(static_cast<std::size_t>(num_actions));
      std::vector<double> grad(static_cast<std::size_t>(dim));
      std::vector<double> direction(static_cast<std::size_t>(num_actions), 0.0);
      for (int it = 0; it < attack.steps; ++it) {
        for (int d = 0; d < dim; ++d) perturbed[d] = obs[d] + delta[d];

        int challenger;
        std::fill(grad.begin(), grad.end(), 0.0);
        if (attack.target == AttackTarget::kSmoothed) {
          // Expectation-over-transforms: average raw values and gradients
          // over a small batch of smoothing noise draws.
          std::vector<double> mean_values(static_cast<std::size_t>(num_actions), 0.0);
          std::vector<double> noisy(perturbed.size());
          const int batch = std::max(1, attack.eot_samples);
          for (int j = 0; j < batch; ++j) {
            for (int d = 0; d < dim; ++d) {
              noisy[d] = perturbed[d] +
                         sigma * eot_rng.gaussian(static_cast<std::uint64_t>(t),
                                                  static_cast<std::uint64_t>(it) * 1024 +
                                                      static_cast<std::uint64_t>(j),
                                                  static_cast<std::uint64_t>(d));
            }
            q.eval_raw(noisy, values);
            for (int a = 0; a < num_actions; ++a) mean_values[a] += values[a];
          }
          for (double& v : mean_values) v /= batch;
          challenger = argmax_excluding(mean_values, victim);
          std::fill(direction.begin(), direction.end(), 0.0);
          direction[challenger] = 1.0;
          direction[victim] = -1.0;
          for (int j = 0; j < batch; ++j) {
            for (int d = 0; d < dim; ++d) {
              noisy[d] = perturbed[d] +
                         sigma * eot_rng.gaussian(static_cast<std::uint64_t>(t),
                                                  static_cast<std::uint64_t>(it) * 1024 +
                                                      static_cast<std::uint64_t>(j),
                                                  static_cast<std::uint64_t>(d));
            }
            const std::vector<double> g = q.input_gradient(noisy, direction);
            for (int d = 0; d < dim; ++d) grad[d] += g[d];
          }
          for (double& g : grad) g /= batch;
        } else {
          q.eval_raw(perturbed, values);
          challenger = argmax_excluding(values, victim);
          std::fill(direction.begin(), direction.end(), 0.0);
          direction[challenger] = 1.0;
          direction[victim] = -1.0;
          grad = q.input_gradient(perturbed, direction);
        }

        const double norm = l2_norm(grad);
        if (norm == 0.0) break;
        for (int d = 0; d < dim; ++d) delta[d] += step_size * grad[d] / norm;
        project_to_ball(delta, attack.epsilon);
      }
    }

    Observation attacked(obs);
    for (int d = 0; d < dim; ++d) attacked[d] += delta[d];
    if (trace != nullptr) trace->delta_norms.push_back(l2_norm(delta));
    const int action = victim_action(backend, attack, attacked, stream);
    const StepResult sr = env.step(action);
    ret += discount * sr.reward;
    discount *= gamma;
    obs = sr.observation;
    if (sr.done) break;
  }
  return ret;
}

double random_attack_episode(Environment& env, const AttackConfig& attack,
                             const SmoothingBackend& backend, int horizon,
                             double gamma, AttackTrace* trace) {
  if (attack.trials < 1) throw DomainError("random_attack_episode: trials must be >= 1");
  if (attack.epsilon < 0.0) {
    throw DomainError("random_attack_episode: epsilon must be >= 0");
  }
  const CounterRng dir_rng{mix64(attack.seed ^ 0xd17u)};
  const int dim = backend.q().obs_dim();

  double ret = 0.0;
  double discount = 1.0;
  Observation obs = env.observation();
  for (int t = 0; t < horizon; ++t) {
    const std::uint64_t stream = state_noise_stream(env.snapshot().key);

    std::vector<double> best_delta(static_cast<std::size_t>(dim), 0.0);
    if (attack.epsilon > 0.0) {
      const int victim = victim_action(backend, attack, obs, stream);
      double best_margin = std::numeric_limits<double>::infinity();
      std::vector<double> candidate(static_cast<std::size_t>(dim));
      Observation perturbed(obs.size());
      for (int j = 0; j <= attack.trials; ++j) {
        if (j == 0) {
          std::fill(candidate.begin(), candidate.end(), 0.0);
        } else {
          for (int d = 0; d < dim; ++d) {
            candidate[d] = dir_rng.gaussian(static_cast<std::uint64_t>(t),
                                            static_cast<std::uint64_t>(j),
                                            static_cast<std::uint64_t>(d));
          }
          const double norm = l2_norm(candidate);
          if (norm == 0.0) continue;
          for (double& x : candidate) x *= attack.epsilon / norm;
        }
        for (int d = 0; d < dim; ++d) perturbed[d] = obs[d] + candidate[d];
        const double margin =
            margin_of(score_values(backend, attack, perturbed, stream), victim);
        if (margin < best_margin) {
          best_margin = margin;
          best_delta = candidate;
        }
      }
    }

    Observation attacked(obs);
    for (int d = 0; d < dim; ++d) attacked[d] += best_delta[d];
    if (trace != nullptr) trace->delta_norms.push_back(l2_norm(best_delta));
    const int action = victim_action(backend, attack, attacked, stream);
    const StepResult sr = env.step(action);
    ret += discount * sr.reward;
    discount *= gamma;
    obs = sr.observation;
    if (sr.done) break;
  }
  return ret;
}

double attacked_randomized_episode(Environment& env, const QFunction& q, double sigma,
                                   const AttackConfig& attack, int horizon,
                                   double gamma, std::uint64_t rollout) {
  const CounterRng dir_rng{mix64(attack.seed ^ 0xd17u)};
  const CounterRng policy_rng{mix64(attack.seed ^ 0x9a11cebeefULL)};
  const int dim = q.obs_dim();

  double ret = 0.0;
  double discount = 1.0;
  Observation obs = env.observation();
  std::vector<double> values(static_cast<std::size_t>(q.num_actions()));
  for (int t = 0; t < horizon; ++t) {
    // The adversary commits to a perturbation of the true state; it cannot
    // see the policy's fresh noise draw.
    std::vector<double> best_delta(static_cast<std::size_t>(dim), 0.0);
    if (attack.epsilon > 0.0) {
      q.eval_raw(obs, values);
      int victim = 0;
      for (int a = 1; a < q.num_actions(); ++a) {
        if (values[a] > values[victim]) victim = a;
      }
      double best_margin = std::numeric_limits<double>::infinity();
      std::vector<double> candidate(static_cast<std::size_t>(dim));
      Observation perturbed(obs.size());
      for (int j = 0; j <= attack.trials; ++j) {
        if (j == 0) {
          std::fill(candidate.begin(), candidate.end(), 0.0);
        } else {
          for (int d = 0; d < dim; ++d) {
            candidate[d] = dir_rng.gaussian(static_cast<std::uint64_t>(t),
                                            static_cast<std::uint64_t>(j),
                                            static_cast<std::uint64_t>(d));
          }
          const double norm = l2_norm(candidate);
          if (norm == 0.0) continue;
          for (double& x : candidate) x *= attack.epsilon / norm;
        }
        for (int d = 0; d < dim; ++d) perturbed[d] = obs[d] + candidate[d];
        q.eval_raw(perturbed, values);
        const double margin = margin_of(values, victim);
        if (margin < best_margin) {
          best_margin = margin;
          best_delta = candidate;
        }
      }
    }

    Observation seen(obs);
    for (int d = 0; d < dim; ++d) {
      seen[d] += best_delta[d] +
                 sigma * policy_rng.gaussian(rollout, static_cast<std::uint64_t>(t),
                                             static_cast<std::uint64_t>(d));
    }
    const int action = q.greedy_action(seen);
    const StepResult sr = env.step(action);
    ret += discount * sr.reward;
    discount *= gamma;
    obs = sr.observation;
    if (sr.done) break;
  }
  return ret;
}

}  // namespace rlcert
