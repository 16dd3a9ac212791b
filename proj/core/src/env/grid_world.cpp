#include "rlcert/env/grid_world.hpp"

#include <sstream>

#include "rlcert/errors.hpp"

namespace rlcert {

void EnvSpec::validate() const {
  if (obs_dim <= 0 || num_actions <= 0 || horizon <= 0) {
    throw DomainError("EnvSpec: obs_dim, num_actions and horizon must be positive");
  }
  if (discount < 0.0 || discount > 1.0) {
    throw DomainError("EnvSpec: discount must lie in [0,1]");
  }
  if (reward_min > reward_max) throw DomainError("EnvSpec: reward_min > reward_max");
  if (return_min > return_max) throw DomainError("EnvSpec: return_min > return_max");
  if (discount == 1.0) {
    if (return_max > horizon * reward_max + 1e-12 ||
        return_min < horizon * reward_min - 1e-12) {
      throw DomainError("EnvSpec: return bounds exceed horizon * step bounds");
    }
  }
  if (reward_nonnegative && reward_min < 0.0) {
    throw DomainError("EnvSpec: reward_nonnegative requires reward_min >= 0");
  }
  if (static_cast<int>(obs_box.size()) != obs_dim) {
    throw DomainError("EnvSpec: obs_box size must equal obs_dim");
  }
}

GridWorld::GridWorld(const Params& params) : params_(params) {
  if (params_.width < 2 || params_.height < 2) {
    throw DomainError("GridWorld: grid must be at least 2x2");
  }
  if (params_.goal_x < 0 || params_.goal_x >= params_.width || params_.goal_y < 0 ||
      params_.goal_y >= params_.height) {
    throw DomainError("GridWorld: goal cell outside the grid");
  }
  spec_.obs_dim = 2;
  spec_.num_actions = 4;
  spec_.horizon = params_.horizon;
  spec_.discount = 1.0;
  spec_.reward_min = 0.0;
  spec_.reward_max = 1.0;
  spec_.return_min = 0.0;
  spec_.return_max = 1.0;  // the goal pays out once and ends the episode
  spec_.reward_nonnegative = true;
  spec_.obs_box = {{0.0, static_cast<double>(params_.width)},
                   {0.0, static_cast<double>(params_.height)}};
  spec_.validate();
  reset(0);
}

Observation GridWorld::reset(std::uint64_t seed) {
  // Seed indexes the non-goal cells in row-major order.
  const int cells = params_.width * params_.height;
  int idx = static_cast<int>(seed % static_cast<std::uint64_t>(cells - 1));
  const int goal_idx = params_.goal_y * params_.width + params_.goal_x;
  if (idx >= goal_idx) ++idx;
  x_ = idx % params_.width;
  y_ = idx / params_.width;
  done_ = false;
  return observation();
}

GridWorld::Transition GridWorld::apply(const Params& p, int x, int y, int action) {
  int nx = x;
  int ny = y;
  switch (action) {
    case 0: nx = x + 1; break;
    case 1: nx = x - 1; break;
    case 2: ny = y + 1; break;
    case 3: ny = y - 1; break;
    default: throw UsageError("GridWorld: action out of range");
  }
  if (nx < 0 || nx >= p.width || ny < 0 || ny >= p.height) {
    nx = x;
    ny = y;
  }
  const bool at_goal = (nx == p.goal_x && ny == p.goal_y);
  return Transition{nx, ny, at_goal ? 1.0 : 0.0, at_goal};
}

StepResult GridWorld::step(int action) {
  if (done_) throw UsageError("GridWorld: step() on a finished episode");
  if (action < 0 || action >= spec_.num_actions) {
    throw UsageError("GridWorld: action out of range");
  }
  const Transition t = apply(params_, x_, y_, action);
  x_ = t.x;
  y_ = t.y;
  done_ = t.done;
  return StepResult{observation(), t.reward, t.done};
}

Observation GridWorld::observation() const {
  return {static_cast<double>(x_) + 0.5, static_cast<double>(y_) + 0.5};
}

EnvSnapshot GridWorld::snapshot() const {
  std::ostringstream key;
  key << "gw:" << x_ << ',' << y_ << ',' << (done_ ? 1 : 0);
  return EnvSnapshot{"rlcert/gridworld/v1 " + key.str(), key.str()};
}

void GridWorld::restore(const EnvSnapshot& s) {
  std::istringstream in(s.payload);
  std::string magic, state;
  in >> magic >> state;
  if (magic != "rlcert/gridworld/v1" || state.rfind("gw:", 0) != 0) {
    throw FormatError("GridWorld: snapshot payload not produced by this environment");
  }
  int x, y, d;
  char c1, c2;
  std::istringstream fields(state.substr(3));
  if (!(fields >> x >> c1 >> y >> c2 >> d) || c1 != ',' || c2 != ',') {
    throw FormatError("GridWorld: malformed snapshot state");
  }
  if (x < 0 || x >= params_.width || y < 0 || y >= params_.height || (d != 0 && d != 1)) {
    throw FormatError("GridWorld: snapshot state outside this grid");
  }
  x_ = x;
  y_ = y;
  done_ = (d == 1);
}

std::unique_ptr<Environment> GridWorld::clone() const {
  return std::make_unique<GridWorld>(*this);
}

}  // namespace rlcert
