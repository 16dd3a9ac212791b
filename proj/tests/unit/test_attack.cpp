#include <cmath>

#include <gtest/gtest.h>

#include "rlcert/attack/attack.hpp"
#include "rlcert/cert/action.hpp"
#include "rlcert/cert/reward_search.hpp"
#include "rlcert/env/discrete_model.hpp"
#include "rlcert/env/grid_world.hpp"
#include "rlcert/env/pole_balance.hpp"
#include "rlcert/qfunc/value_iteration.hpp"
#include "test_util.hpp"

namespace rlcert {
namespace {

GridQ gridworld_q(const GridWorld& env) {
  const DiscreteModel model = discretize(env);
  return make_grid_q(model, value_iteration(model, 0.9));
}

SmoothingConfig small_cfg(double sigma) {
  SmoothingConfig cfg;
  cfg.sigma = sigma;
  cfg.m = 400;
  cfg.seed = 4;
  return cfg;
}

TEST(PgdAttack, ZeroBudgetIsBenign) {
  PoleBalance env;
  const MlpQ q = MlpQ::random({4, 16, 2}, 12);
  const McSmoothingBackend backend(q, small_cfg(0.05));

  env.reset(3);
  double benign = 0.0;
  {
    env.reset(3);
    const auto [certs, ret] = certify_episode(env, backend, 25);
    benign = ret;
  }
  AttackConfig attack;
  attack.epsilon = 0.0;
  env.reset(3);
  EXPECT_DOUBLE_EQ(pgd_attack_episode(env, q, attack, backend, 25), benign);
}

TEST(PgdAttack, BudgetCompliance) {
  PoleBalance env;
  const MlpQ q = MlpQ::random({4, 16, 2}, 12);
  const McSmoothingBackend backend(q, small_cfg(0.05));
  AttackConfig attack;
  attack.epsilon = 0.07;
  attack.steps = 10;
  attack.seed = 2;
  AttackTrace trace;
  env.reset(3);
  pgd_attack_episode(env, q, attack, backend, 25, 1.0, &trace);
  ASSERT_FALSE(trace.delta_norms.empty());
  for (double n : trace.delta_norms) EXPECT_LE(n, attack.epsilon + 1e-12);
}

TEST(PgdAttack, RawTargetFlipsWeakMargins) {
  // With a generous budget the raw-policy attack should flip at least one
  // decision somewhere along the rollout of a random network.
  PoleBalance env;
  const MlpQ q = MlpQ::random({4, 16, 2}, 12);
  const McSmoothingBackend backend(q, small_cfg(0.05));
  AttackConfig attack;
  attack.epsilon = 1.0;
  attack.target = AttackTarget::kRaw;
  env.reset(3);
  const double attacked = pgd_attack_episode(env, q, attack, backend, 25);
  env.reset(3);
  double benign = 0.0;
  for (int t = 0; t < 25; ++t) {
    const auto sr = env.step(q.greedy_action(env.observation()));
    benign += sr.reward;
    if (sr.done) break;
  }
  EXPECT_LE(attacked, benign);
}

TEST(RandomAttack, ZeroBudgetIsBenign) {
  GridWorld env;
  const GridQ q = gridworld_q(env);
  const ExactSmoothingBackend backend(q, small_cfg(0.1));
  env.reset(0);
  const auto [certs, benign] = certify_episode(env, backend, 20);

  AttackConfig attack;
  attack.epsilon = 0.0;
  attack.trials = 1;
  env.reset(0);
  EXPECT_DOUBLE_EQ(random_attack_episode(env, attack, backend, 20), benign);
}

TEST(RandomAttack, FlipsJustAboveCertifiedRadius) {
  // 1-D mirrored step table: at obs -d the exact radius is d, and the
  // certificate is tight, so budget 1.05*d must flip the action.
  const GridQ q({{0.0}}, {1.0, 0.0, 0.0, 1.0}, 2);
  SmoothingConfig cfg;
  cfg.sigma = 0.5;
  const ExactSmoothingBackend backend(q, cfg);

  const double d = 0.2;
  const Observation obs{-d};
  const SmoothedEstimate est = backend.estimate(obs, 0);
  EXPECT_EQ(est.top_action, 0);
  const double radius = certified_radius(est, cfg);
  EXPECT_NEAR(radius, d, 1e-9);

  int flips = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    testing::ChainEnv dummy(2, {0, 0, 0, 0}, 1);  // carrier env, 1-D obs
    dummy.reset(0);
    // Evaluate the victim at the perturbed point directly: sample candidate
    // directions like the attack and check the argmax flips for at least one.
    CounterRng rng{seed};
    for (int j = 0; j < 8; ++j) {
      const double dir = rng.gaussian(0, j, 0) >= 0.0 ? 1.0 : -1.0;
      Observation shifted{obs[0] + dir * 1.05 * radius};
      if (backend.estimate(shifted, 0).top_action != est.top_action) {
        ++flips;
        break;
      }
    }
  }
  EXPECT_GE(flips, 1);
}

TEST(RandomAttack, ReturnsDominateSearchBound) {
  GridWorld env;
  const GridQ q = gridworld_q(env);
  const ExactSmoothingBackend backend(q, small_cfg(0.1));

  RewardSearchOptions opts;
  opts.eps_max = 0.12;
  opts.enable_pruning = true;
  env.reset(0);
  const RewardCertificate cert =
      certify_reward_search(env, backend, env.spec().horizon, opts);

  for (double eps : {0.02, 0.06, 0.1}) {
    AttackConfig attack;
    attack.epsilon = eps;
    attack.trials = 24;
    attack.seed = 77;
    env.reset(0);
    const double attacked =
        random_attack_episode(env, attack, backend, env.spec().horizon);
    EXPECT_GE(attacked, cert.bound_at(eps) - 1e-12) << "eps=" << eps;
  }
}

TEST(RandomizedPolicyAttack, RespectsSigmaZeroAndRuns) {
  GridWorld env;
  const GridQ q = gridworld_q(env);
  AttackConfig attack;
  attack.epsilon = 0.0;
  env.reset(0);
  const double unattacked =
      attacked_randomized_episode(env, q, 0.0, attack, 20, 1.0, 0);
  env.reset(0);
  double benign = 0.0;
  for (int t = 0; t < 20; ++t) {
    const auto sr = env.step(q.greedy_action(env.observation()));
    benign += sr.reward;
    if (sr.done) break;
  }
  EXPECT_DOUBLE_EQ(unattacked, benign);

  attack.epsilon = 0.1;
  env.reset(0);
  const double a = attacked_randomized_episode(env, q, 0.2, attack, 20, 1.0, 1);
  env.reset(0);
  const double b = attacked_randomized_episode(env, q, 0.2, attack, 20, 1.0, 1);
  EXPECT_DOUBLE_EQ(a, b);  // deterministic given (seed, rollout)
}

}  // namespace
}  // namespace rlcert
