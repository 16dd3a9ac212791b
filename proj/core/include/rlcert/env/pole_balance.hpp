#pragma once

#include <array>

#include "rlcert/env/environment.hpp"

namespace rlcert {

/// Deterministic cart-pole: 4-D state (position, velocity, angle, angular
/// velocity), explicit-Euler dynamics, 2 actions (push left / push right),
/// reward 1 per step until the pole falls or the cart leaves the track.
/// Velocities are clamped to the declared observation box.
class PoleBalance final : public Environment {
 public:
  struct Params {
    double force = 10.0;
    double dt = 0.02;
    double angle_limit = 0.2095;  // ~12 degrees
    double position_limit = 2.4;
    int horizon = 200;
  };

  PoleBalance() : PoleBalance(Params{}) {}
  explicit PoleBalance(const Params& params);

  const EnvSpec& spec() const override { return spec_; }
  std::string name() const override { return "pole_balance"; }
  Observation reset(std::uint64_t seed) override;
  StepResult step(int action) override;
  Observation observation() const override;
  EnvSnapshot snapshot() const override;
  void restore(const EnvSnapshot& s) override;
  std::unique_ptr<Environment> clone() const override;

  const Params& params() const { return params_; }

 private:
  Params params_;
  EnvSpec spec_;
  std::array<double, 4> state_{};  // x, v, theta, omega
  bool done_ = false;
};

}  // namespace rlcert
