#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "rlcert/env/discrete_model.hpp"
#include "rlcert/env/grid_world.hpp"
#include "rlcert/errors.hpp"
#include "rlcert/noise.hpp"
#include "rlcert/qfunc/grid_q.hpp"
#include "rlcert/qfunc/mlp_q.hpp"
#include "rlcert/qfunc/value_iteration.hpp"
#include "rlcert/qfunc/weights_io.hpp"
#include "test_util.hpp"

namespace rlcert {
namespace {

/// Independent oracle: finite-horizon dynamic program over the model,
/// Q_K(s,a) = r + gamma * (terminal ? 0 : max_a' Q_{K-1}(s',a')), run until
/// the horizon is long enough to reach the fixed point of these episodic
/// problems.
std::vector<double> dp_oracle(const DiscreteModel& model, double gamma, int sweeps) {
  std::vector<double> q(static_cast<std::size_t>(model.num_states) * model.num_actions,
                        0.0);
  std::vector<double> next(q.size());
  for (int k = 0; k < sweeps; ++k) {
    for (int s = 0; s < model.num_states; ++s) {
      for (int a = 0; a < model.num_actions; ++a) {
        const auto& o = model.outcome(s, a);
        double target = o.reward;
        if (!o.terminal) {
          double best = q[static_cast<std::size_t>(o.next_state) * model.num_actions];
          for (int b = 1; b < model.num_actions; ++b) {
            best = std::max(
                best, q[static_cast<std::size_t>(o.next_state) * model.num_actions + b]);
          }
          target += gamma * best;
        }
        next[static_cast<std::size_t>(s) * model.num_actions + a] = target;
      }
    }
    q.swap(next);
  }
  return q;
}

DiscreteModel absorbing_state_model() {
  DiscreteModel model;
  model.num_states = 1;
  model.num_actions = 2;
  model.outcomes = {{0, 0.0, false}, {0, 0.0, false}};
  model.cell_edges = {{}};
  model.state_cells = {{0}};
  return model;
}

TEST(ValueIteration, AbsorbingZeroRewardIsZero) {
  const auto model = absorbing_state_model();
  const auto q = value_iteration(model, 0.9);
  for (double v : q) EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(ValueIteration, TwoStateChain) {
  // State 0 with action 1 reaches the terminal goal (reward 1); action 0
  // stays. Q(0, toward-goal) must be exactly 1 at gamma=0.9.
  DiscreteModel model;
  model.num_states = 1;
  model.num_actions = 2;
  model.outcomes = {{0, 0.0, false}, {0, 1.0, true}};
  model.cell_edges = {{}};
  model.state_cells = {{0}};
  const auto q = value_iteration(model, 0.9, {1e-12, 100000});
  EXPECT_NEAR(q[1], 1.0, 1e-9);
  EXPECT_NEAR(q[0], 0.9, 1e-9);  // step, then take the goal next state
}

TEST(ValueIteration, GridWorldMatchesDpOracle) {
  GridWorld env;
  const DiscreteModel model = discretize(env);
  for (double gamma : {0.9, 1.0}) {
    const auto q = value_iteration(model, gamma, {1e-11, 200000});
    const auto oracle = dp_oracle(model, gamma, 400);
    ASSERT_EQ(q.size(), oracle.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
      EXPECT_NEAR(q[i], oracle[i], 1e-8) << "gamma=" << gamma << " idx=" << i;
    }
    EXPECT_LE(bellman_residual(model, gamma, q), 1e-11);
  }
}

TEST(ValueIteration, NonConvergenceDiagnosed) {
  GridWorld env;
  const DiscreteModel model = discretize(env);
  EXPECT_THROW(value_iteration(model, 0.9, {1e-12, 2}), ConvergenceError);
}

TEST(QFunctionEval, ConstantTableAndClipping) {
  GridQ q({{0.0}}, {0.5, 0.5, 0.5, 0.5}, 2);
  const QValues v = q.eval(Observation{0.3}, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(v.values[0], 0.5);
  EXPECT_DOUBLE_EQ(v.values[1], 0.5);

  GridQ hot({{0.0}}, {2.0, -1.0, 2.0, -1.0}, 2);
  const QValues clipped = hot.eval(Observation{0.3}, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(clipped.values[0], 1.0);
  EXPECT_DOUBLE_EQ(clipped.values[1], 0.0);

  EXPECT_THROW(q.eval(Observation{std::nan("")}, 0.0, 1.0), DomainError);
}

TEST(QFunctionEval, ClipIdempotentOnClippedTables) {
  const GridQ q = testing::random_grid_q(2, 3, 21).clipped(0.2, 0.8);
  for (int i = 0; i < 50; ++i) {
    const Observation obs = testing::random_obs(2, 77, i);
    const QValues once = q.eval(obs, 0.2, 0.8);
    std::vector<double> raw(3);
    q.eval_raw(obs, raw);
    for (int a = 0; a < 3; ++a) EXPECT_DOUBLE_EQ(once.values[a], raw[a]);
  }
}

TEST(GridQ, OuterCellsCatchOutOfBoxPoints) {
  GridQ q({{0.0, 1.0}}, {1, 2, 3}, 1);
  std::vector<double> out(1);
  q.eval_raw(Observation{-100.0}, out);
  EXPECT_DOUBLE_EQ(out[0], 1.0);
  q.eval_raw(Observation{100.0}, out);
  EXPECT_DOUBLE_EQ(out[0], 3.0);
  q.eval_raw(Observation{0.5}, out);
  EXPECT_DOUBLE_EQ(out[0], 2.0);
}

TEST(MlpQ, SingleLayerLinearAlgebra) {
  MlpQ::Layer l;
  l.rows = 2;
  l.cols = 3;
  l.weights = {1, 2, 3, 4, 5, 6};
  l.bias = {0.5, -0.5};
  MlpQ q({l});
  std::vector<double> out(2);
  q.eval_raw(Observation{1.0, 0.0, 0.0}, out);
  EXPECT_DOUBLE_EQ(out[0], 1.5);   // bias + first column
  EXPECT_DOUBLE_EQ(out[1], 3.5);

  // Gradient of d . Q for a linear map is W^T d.
  const std::vector<double> e0 = {1.0, 0.0};
  const auto g = q.input_gradient(Observation{0.2, 0.1, -0.3}, e0);
  EXPECT_DOUBLE_EQ(g[0], 1.0);
  EXPECT_DOUBLE_EQ(g[1], 2.0);
  EXPECT_DOUBLE_EQ(g[2], 3.0);

  const std::vector<double> zdir = {0.0, 0.0};
  const auto zero = q.input_gradient(Observation{0.2, 0.1, -0.3}, zdir);
  for (double v : zero) EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(MlpQ, GradientMatchesCentralDifferences) {
  // 100 random (network, observation) pairs; h = 1e-5 central differences.
  int checked = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const MlpQ q = MlpQ::random({3, 8, 8, 2}, 1000 + trial);
    CounterRng rng{500 + trial};
    Observation obs(3);
    for (int d = 0; d < 3; ++d) obs[d] = 2.0 * rng.uniform(0, 0, d) - 1.0;
    std::vector<double> dir = {rng.gaussian(1, 0, 0), rng.gaussian(1, 0, 1)};

    const auto grad = q.input_gradient(obs, dir);
    const double h = 1e-5;
    for (int d = 0; d < 3; ++d) {
      Observation plus = obs, minus = obs;
      plus[d] += h;
      minus[d] -= h;
      std::vector<double> vp(2), vm(2);
      q.eval_raw(plus, vp);
      q.eval_raw(minus, vm);
      const double fd =
          ((dir[0] * vp[0] + dir[1] * vp[1]) - (dir[0] * vm[0] + dir[1] * vm[1])) /
          (2 * h);
      const double scale = std::max({1.0, std::abs(fd), std::abs(grad[d])});
      EXPECT_NEAR(grad[d], fd, 1e-4 * scale) << "trial=" << trial << " d=" << d;
      ++checked;
    }
  }
  EXPECT_EQ(checked, 300);
}

TEST(MlpQ, GradientUnsupportedOnGridQ) {
  const GridQ q = testing::random_grid_q(2, 3, 4);
  const std::vector<double> dir = {1.0, 0.0, 0.0};
  EXPECT_THROW(input_gradient(q, Observation{0.0, 0.0}, dir), UnsupportedError);
}

TEST(WeightsIo, RoundTripBitExact) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "rlcert_weights_test";
  fs::create_directories(dir);

  const GridQ grid = testing::random_grid_q(2, 4, 99);
  save_weights(grid, (dir / "grid.json").string());
  const auto grid2 = load_weights((dir / "grid.json").string());
  const MlpQ mlp = MlpQ::random({3, 16, 4}, 7);
  save_weights(mlp, (dir / "mlp.json").string());
  const auto mlp2 = load_weights((dir / "mlp.json").string());

  for (int i = 0; i < 1000; ++i) {
    const Observation obs2 = testing::random_obs(2, 31, i);
    const Observation obs3 = testing::random_obs(3, 32, i);
    std::vector<double> a(4), b(4);
    grid.eval_raw(obs2, a);
    grid2->eval_raw(obs2, b);
    EXPECT_EQ(a, b);
    mlp.eval_raw(obs3, a);
    mlp2->eval_raw(obs3, b);
    EXPECT_EQ(a, b);
  }
  fs::remove_all(dir);
}

TEST(WeightsIo, MalformedFilesRejected) {
  const std::string good = weights_to_string(testing::random_grid_q(2, 2, 1));

  // Truncation breaks the document.
  EXPECT_THROW(weights_from_string(good.substr(0, good.size() / 2)), FormatError);

  // A missing section is named.
  try {
    weights_from_string(R"({"format_version":1,"kind":"grid","num_actions":2})");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("edges"), std::string::npos);
  }

  // Version mismatches are called out explicitly.
  try {
    weights_from_string(R"({"format_version":9,"kind":"grid"})");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("format_version"), std::string::npos);
  }

  EXPECT_THROW(weights_from_string(R"({"format_version":1,"kind":"conv"})"),
               FormatError);
}

}  // namespace
}  // namespace rlcert
