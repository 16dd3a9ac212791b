#include "rlcert/env/pole_balance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "rlcert/errors.hpp"
#include "rlcert/noise.hpp"

namespace rlcert {

namespace {
constexpr double kGravity = 9.8;
constexpr double kCartMass = 1.0;
constexpr double kPoleMass = 0.1;
constexpr double kPoleHalfLength = 0.5;
constexpr double kVelocityLimit = 10.0;

std::string hex_of(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}
}  // namespace

PoleBalance::PoleBalance(const Params& params) : params_(params) {
  spec_.obs_dim = 4;
  spec_.num_actions = 2;
  spec_.horizon = params_.horizon;
  spec_.discount = 1.0;
  spec_.reward_min = 0.0;
  spec_.reward_max = 1.0;
  spec_.return_min = 0.0;
  spec_.return_max = static_cast<double>(params_.horizon);
  spec_.reward_nonnegative = true;
  spec_.obs_box = {{-params_.position_limit, params_.position_limit},
                   {-kVelocityLimit, kVelocityLimit},
                   {-params_.angle_limit, params_.angle_limit},
                   {-kVelocityLimit, kVelocityLimit}};
  spec_.validate();
  reset(0);
}

Observation PoleBalance::reset(std::uint64_t seed) {
  CounterRng rng{seed};
  for (int d = 0; d < 4; ++d) {
    // Small deterministic offset in [-0.05, 0.05], like the usual benchmark.
    state_[d] = (rng.uniform(0xb41a7ce, 0, static_cast<std::uint64_t>(d)) - 0.5) * 0.1;
  }
  done_ = false;
  return observation();
}

StepResult PoleBalance::step(int action) {
  if (done_) throw UsageError("PoleBalance: step() on a finished episode");
  if (action != 0 && action != 1) throw UsageError("PoleBalance: action out of range");

  const double force = (action == 1) ? params_.force : -params_.force;
  const double total_mass = kCartMass + kPoleMass;
  const double pole_mass_length = kPoleMass * kPoleHalfLength;

  double x = state_[0], v = state_[1], theta = state_[2], omega = state_[3];
  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);
  const double temp = (force + pole_mass_length * omega * omega * sin_t) / total_mass;
  const double theta_acc =
      (kGravity * sin_t - cos_t * temp) /
      (kPoleHalfLength * (4.0 / 3.0 - kPoleMass * cos_t * cos_t / total_mass));
  const double x_acc = temp - pole_mass_length * theta_acc * cos_t / total_mass;

  x += params_.dt * v;
  v += params_.dt * x_acc;
  theta += params_.dt * omega;
  omega += params_.dt * theta_acc;
  v = std::clamp(v, -kVelocityLimit, kVelocityLimit);
  omega = std::clamp(omega, -kVelocityLimit, kVelocityLimit);

  done_ = std::abs(x) > params_.position_limit || std::abs(theta) > params_.angle_limit;
  // Keep the reported observation inside the declared box even on the
  // terminating step.
  state_[0] = std::clamp(x, -params_.position_limit, params_.position_limit);
  state_[1] = v;
  state_[2] = std::clamp(theta, -params_.angle_limit, params_.angle_limit);
  state_[3] = omega;
  return StepResult{observation(), 1.0, done_};
}

Observation PoleBalance::observation() const {
  return {state_[0], state_[1], state_[2], state_[3]};
}

EnvSnapshot PoleBalance::snapshot() const {
  std::ostringstream key;
  key << "pb:" << hex_of(state_[0]) << ',' << hex_of(state_[1]) << ','
      << hex_of(state_[2]) << ',' << hex_of(state_[3]) << ',' << (done_ ? 1 : 0);
  return EnvSnapshot{"rlcert/pole_balance/v1 " + key.str(), key.str()};
}

void PoleBalance::restore(const EnvSnapshot& s) {
  std::istringstream in(s.payload);
  std::string magic, state;
  in >> magic >> state;
  if (magic != "rlcert/pole_balance/v1" || state.rfind("pb:", 0) != 0) {
    throw FormatError("PoleBalance: snapshot payload not produced by this environment");
  }
  std::string rest = state.substr(3);
  std::replace(rest.begin(), rest.end(), ',', ' ');
  std::istringstream fields(rest);
  std::array<double, 4> parsed{};
  int d = 0;
  std::string tok;
  for (int i = 0; i < 4; ++i) {
    if (!(fields >> tok)) throw FormatError("PoleBalance: malformed snapshot");
    parsed[i] = std::strtod(tok.c_str(), nullptr);
  }
  if (!(fields >> d) || (d != 0 && d != 1)) {
    throw FormatError("PoleBalance: malformed snapshot");
  }
  state_ = parsed;
  done_ = (d == 1);
}

std::unique_ptr<Environment> PoleBalance::clone() const {
  return std::make_unique<PoleBalance>(*this);
}

}  // namespace rlcert
