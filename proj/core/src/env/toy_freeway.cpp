#include "rlcert/env/toy_freeway.hpp"

#include <sstream>

#include "rlcert/errors.hpp"
#include "rlcert/noise.hpp"

namespace rlcert {

ToyFreeway::ToyFreeway(const Params& params) : params_(params) {
  if (params_.lanes < 1 || params_.width < 2) {
    throw DomainError("ToyFreeway: need at least 1 lane and width >= 2");
  }
  spec_.obs_dim = 1 + params_.lanes;
  spec_.num_actions = 3;
  spec_.horizon = params_.horizon;
  spec_.discount = 1.0;
  spec_.reward_min = 0.0;
  spec_.reward_max = 1.0;
  spec_.return_min = 0.0;
  // A crossing takes at least lanes+1 upward moves from row 0.
  spec_.return_max = static_cast<double>(params_.horizon / (params_.lanes + 1));
  spec_.reward_nonnegative = true;
  spec_.obs_box.push_back({0.0, static_cast<double>(params_.lanes + 1)});
  for (int l = 0; l < params_.lanes; ++l) {
    spec_.obs_box.push_back({0.0, static_cast<double>(params_.width - 1)});
  }
  spec_.validate();
  reset(0);
}

Observation ToyFreeway::reset(std::uint64_t seed) {
  state_.row = 0;
  state_.cars.assign(params_.lanes, 0);
  for (int l = 0; l < params_.lanes; ++l) {
    state_.cars[l] = static_cast<int>(
        mix64(seed + 0x51ed2701u * static_cast<std::uint64_t>(l + 1)) %
        static_cast<std::uint64_t>(params_.width));
  }
  return observation();
}

ToyFreeway::Transition ToyFreeway::apply(const Params& p, const State& s, int action) {
  State next = s;
  switch (action) {
    case 0: break;
    case 1: next.row = std::min(s.row + 1, p.lanes + 1); break;
    case 2: next.row = std::max(s.row - 1, 0); break;
    default: throw UsageError("ToyFreeway: action out of range");
  }
  for (int l = 0; l < p.lanes; ++l) {
    next.cars[l] = (next.cars[l] + 1) % p.width;
  }
  double reward = 0.0;
  const int agent_col = p.width / 2;
  if (next.row >= 1 && next.row <= p.lanes && next.cars[next.row - 1] == agent_col) {
    next.row = 0;  // hit: sent back, no penalty
  } else if (next.row == p.lanes + 1) {
    reward = 1.0;  // crossed
    next.row = 0;
  }
  return Transition{next, reward};
}

StepResult ToyFreeway::step(int action) {
  if (action < 0 || action >= spec_.num_actions) {
    throw UsageError("ToyFreeway: action out of range");
  }
  const Transition t = apply(params_, state_, action);
  state_ = t.state;
  return StepResult{observation(), t.reward, false};
}

Observation ToyFreeway::observation() const {
  Observation obs;
  obs.reserve(spec_.obs_dim);
  obs.push_back(static_cast<double>(state_.row));
  for (int c : state_.cars) obs.push_back(static_cast<double>(c));
  return obs;
}

void ToyFreeway::set_state(const State& s) {
  if (static_cast<int>(s.cars.size()) != params_.lanes || s.row < 0 ||
      s.row > params_.lanes + 1) {
    throw UsageError("ToyFreeway: invalid state");
  }
  state_ = s;
}

EnvSnapshot ToyFreeway::snapshot() const {
  std::ostringstream key;
  key << "fw:" << state_.row;
  for (int c : state_.cars) key << ',' << c;
  return EnvSnapshot{"rlcert/toy_freeway/v1 " + key.str(), key.str()};
}

void ToyFreeway::restore(const EnvSnapshot& s) {
  std::istringstream in(s.payload);
  std::string magic, state;
  in >> magic >> state;
  if (magic != "rlcert/toy_freeway/v1" || state.rfind("fw:", 0) != 0) {
    throw FormatError("ToyFreeway: snapshot payload not produced by this environment");
  }
  std::istringstream fields(state.substr(3));
  State parsed;
  char sep;
  if (!(fields >> parsed.row)) throw FormatError("ToyFreeway: malformed snapshot");
  parsed.cars.assign(params_.lanes, 0);
  for (int l = 0; l < params_.lanes; ++l) {
    if (!(fields >> sep >> parsed.cars[l]) || sep != ',') {
      throw FormatError("ToyFreeway: snapshot lane count mismatch");
    }
    if (parsed.cars[l] < 0 || parsed.cars[l] >= params_.width) {
      throw FormatError("ToyFreeway: snapshot car position outside road");
    }
  }
  if (parsed.row < 0 || parsed.row > params_.lanes + 1) {
    throw FormatError("ToyFreeway: snapshot row outside road");
  }
  state_ = parsed;
}

std::unique_ptr<Environment> ToyFreeway::clone() const {
  return std::make_unique<ToyFreeway>(*this);
}

}  // namespace rlcert
