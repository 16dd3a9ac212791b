#pragma once

#include "rlcert/env/environment.hpp"

namespace rlcert {

/// Road-crossing game with cyclic deterministic traffic. The agent sits at a
/// fixed column and moves between rows 0 (start side) and lanes+1 (far side);
/// rows 1..lanes each carry one car that advances one cell per step and wraps
/// at `width`. Reaching the far side scores +1 and teleports the agent back to
/// row 0; being hit sends it back to row 0 with no penalty, so all rewards are
/// nonnegative. The episode never terminates on its own; callers run it for a
/// horizon. Actions: 0 = stay, 1 = up, 2 = down.
///
/// Observation: [row, car_0, ..., car_{lanes-1}].
class ToyFreeway final : public Environment {
 public:
  struct Params {
    int lanes = 2;
    int width = 5;
    int horizon = 30;
  };

  ToyFreeway() : ToyFreeway(Params{}) {}
  explicit ToyFreeway(const Params& params);

  const EnvSpec& spec() const override { return spec_; }
  std::string name() const override { return "toy_freeway"; }
  Observation reset(std::uint64_t seed) override;
  StepResult step(int action) override;
  Observation observation() const override;
  EnvSnapshot snapshot() const override;
  void restore(const EnvSnapshot& s) override;
  std::unique_ptr<Environment> clone() const override;

  const Params& params() const { return params_; }
  int agent_column() const { return params_.width / 2; }

  struct State {
    int row = 0;
    std::vector<int> cars;
  };
  struct Transition {
    State state;
    double reward;
  };
  static Transition apply(const Params& p, const State& s, int action);

  const State& state() const { return state_; }
  void set_state(const State& s);

 private:
  Params params_;
  EnvSpec spec_;
  State state_;
};

}  // namespace rlcert
