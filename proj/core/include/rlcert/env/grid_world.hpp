#pragma once

#include "rlcert/env/environment.hpp"

namespace rlcert {

/// Rectangular grid with a single absorbing goal cell. The observation is the
/// 2-D center of the agent's cell. Actions: 0 = +x, 1 = -x, 2 = +y, 3 = -y;
/// stepping into the boundary leaves the position unchanged. Entering the
/// goal yields reward 1 and ends the episode; every other step is reward 0.
class GridWorld final : public Environment {
 public:
  struct Params {
    int width = 5;
    int height = 5;
    int goal_x = 4;
    int goal_y = 4;
    int horizon = 40;
  };

  GridWorld() : GridWorld(Params{}) {}
  explicit GridWorld(const Params& params);

  const EnvSpec& spec() const override { return spec_; }
  std::string name() const override { return "gridworld"; }
  Observation reset(std::uint64_t seed) override;
  StepResult step(int action) override;
  Observation observation() const override;
  EnvSnapshot snapshot() const override;
  void restore(const EnvSnapshot& s) override;
  std::unique_ptr<Environment> clone() const override;

  const Params& params() const { return params_; }

  // Pure transition used by both step() and the discretizer.
  // Returns (next_x, next_y, reward, done).
  struct Transition {
    int x;
    int y;
    double reward;
    bool done;
  };
  static Transition apply(const Params& p, int x, int y, int action);

 private:
  Params params_;
  EnvSpec spec_;
  int x_ = 0;
  int y_ = 0;
  bool done_ = false;
};

}  // namespace rlcert
