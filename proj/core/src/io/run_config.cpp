#include "rlcert/io/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rlcert/env/grid_world.hpp"
#include "rlcert/env/pole_balance.hpp"
#include "rlcert/env/toy_freeway.hpp"
#include "rlcert/errors.hpp"
#include "rlcert/io/csv.hpp"
#include "rlcert/noise.hpp"

namespace rlcert {

namespace {

using nlohmann::json;

/// Verifies that `j` contains no keys outside `allowed`; `where` names the
/// object in diagnostics.
void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!j.is_object()) throw ConfigError("config: '" + where + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      throw ConfigError("config: unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: field '" + where + "." + key + "' has the wrong type");
  }
}

std::vector<double> number_or_list(const json& j, const char* key,
                                   std::vector<double> fallback,
                                   const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (it->is_number()) return {it->get<double>()};
  if (it->is_array()) {
    std::vector<double> out;
    for (const auto& v : *it) {
      if (!v.is_number()) {
        throw ConfigError("config: field '" + where + "." + key +
                          "' must hold numbers");
      }
      out.push_back(v.get<double>());
    }
    if (out.empty()) {
      throw ConfigError("config: field '" + where + "." + key + "' must be non-empty");
    }
    return out;
  }
  throw ConfigError("config: field '" + where + "." + key +
                    "' must be a number or a list of numbers");
}

}  // namespace

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::kCertifyAction: return "certify-action";
    case RunMode::kCertifyRewardGlobal: return "certify-reward-global";
    case RunMode::kCertifyRewardLocal: return "certify-reward-local";
    case RunMode::kAttack: return "attack";
  }
  return "unknown";
}

RunConfig parse_run_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: document root must be an object");

  reject_unknown(j,
                 {"env", "q", "smoothing", "horizon", "gamma", "mode",
                  "certify_action", "certify_reward_global", "certify_reward_local",
                  "attack", "output"},
                 "document root");

  RunConfig cfg;

  const auto env = j.find("env");
  if (env == j.end() || !env->is_object()) {
    throw ConfigError("config: missing 'env' object");
  }
  reject_unknown(*env,
                 {"name", "width", "height", "goal_x", "goal_y", "lanes",
                  "road_width", "seed"},
                 "env");
  cfg.env_name = get_or<std::string>(*env, "name", "", "env");
  if (cfg.env_name != "gridworld" && cfg.env_name != "toy_freeway" &&
      cfg.env_name != "pole_balance") {
    throw ConfigError("config: env.name must be one of gridworld, toy_freeway, "
                      "pole_balance; got '" + cfg.env_name + "'");
  }
  cfg.env_width = get_or<int>(*env, "width", cfg.env_width, "env");
  cfg.env_height = get_or<int>(*env, "height", cfg.env_height, "env");
  cfg.env_goal_x = get_or<int>(*env, "goal_x", cfg.env_width - 1, "env");
  cfg.env_goal_y = get_or<int>(*env, "goal_y", cfg.env_height - 1, "env");
  cfg.env_lanes = get_or<int>(*env, "lanes", cfg.env_lanes, "env");
  cfg.env_road_width = get_or<int>(*env, "road_width", cfg.env_road_width, "env");
  cfg.env_seed = get_or<std::uint64_t>(*env, "seed", cfg.env_seed, "env");

  if (const auto q = j.find("q"); q != j.end()) {
    if (!q->is_object()) throw ConfigError("config: 'q' must be an object");
    reject_unknown(*q, {"source", "path", "gamma", "tol"}, "q");
    const std::string source = get_or<std::string>(*q, "source", "value_iteration", "q");
    if (source == "weights") {
      cfg.q_from_weights = true;
      cfg.q_weights_path = get_or<std::string>(*q, "path", "", "q");
      if (cfg.q_weights_path.empty()) {
        throw ConfigError("config: q.source=weights requires q.path");
      }
    } else if (source != "value_iteration") {
      throw ConfigError("config: q.source must be value_iteration or weights");
    }
    cfg.q_gamma = get_or<double>(*q, "gamma", cfg.q_gamma, "q");
    cfg.q_tol = get_or<double>(*q, "tol", cfg.q_tol, "q");
    if (!(cfg.q_tol > 0.0)) throw ConfigError("config: q.tol must be > 0");
    if (cfg.q_gamma < 0.0 || cfg.q_gamma > 1.0) {
      throw ConfigError("config: q.gamma must lie in [0,1]");
    }
  }

  if (const auto s = j.find("smoothing"); s != j.end()) {
    if (!s->is_object()) throw ConfigError("config: 'smoothing' must be an object");
    reject_unknown(*s, {"sigma", "m", "alpha", "seed", "backend", "range"}, "smoothing");
    cfg.sigmas = number_or_list(*s, "sigma", cfg.sigmas, "smoothing");
    for (double sig : cfg.sigmas) {
      if (!(sig > 0.0)) {
        throw ConfigError("config: smoothing.sigma must be > 0, got " +
                          format_double(sig));
      }
    }
    const auto m_val = get_or<std::int64_t>(*s, "m", static_cast<std::int64_t>(cfg.m),
                                            "smoothing");
    if (m_val < 2) throw ConfigError("config: smoothing.m must be >= 2");
    cfg.m = static_cast<std::size_t>(m_val);
    cfg.alpha = get_or<double>(*s, "alpha", cfg.alpha, "smoothing");
    if (!(cfg.alpha > 0.0) || !(cfg.alpha < 1.0)) {
      throw ConfigError("config: smoothing.alpha must lie in (0,1)");
    }
    cfg.seed = get_or<std::uint64_t>(*s, "seed", cfg.seed, "smoothing");
    const std::string backend = get_or<std::string>(*s, "backend", "mc", "smoothing");
    if (backend == "exact") {
      cfg.exact_backend = true;
    } else if (backend != "mc") {
      throw ConfigError("config: smoothing.backend must be mc or exact");
    }
    if (const auto r = s->find("range"); r != s->end()) {
      if (!r->is_object()) throw ConfigError("config: smoothing.range must be an object");
      reject_unknown(*r, {"mode", "episodes", "v_min", "v_max"}, "smoothing.range");
      const std::string mode = get_or<std::string>(*r, "mode", "estimate",
                                                   "smoothing.range");
      if (mode == "explicit") {
        cfg.explicit_range = true;
        cfg.v_min = get_or<double>(*r, "v_min", 0.0, "smoothing.range");
        cfg.v_max = get_or<double>(*r, "v_max", 1.0, "smoothing.range");
        if (!(cfg.v_min < cfg.v_max)) {
          throw ConfigError("config: smoothing.range.v_min must be < v_max");
        }
      } else if (mode == "estimate") {
        cfg.range_episodes = get_or<int>(*r, "episodes", cfg.range_episodes,
                                         "smoothing.range");
        if (cfg.range_episodes < 1) {
          throw ConfigError("config: smoothing.range.episodes must be >= 1");
        }
      } else {
        throw ConfigError("config: smoothing.range.mode must be estimate or explicit");
      }
    }
  }

  cfg.horizon = get_or<int>(j, "horizon", 0, "document root");
  if (cfg.horizon < 0) throw ConfigError("config: horizon must be >= 0");
  cfg.gamma = get_or<double>(j, "gamma", 1.0, "document root");
  if (cfg.gamma < 0.0 || cfg.gamma > 1.0) {
    throw ConfigError("config: gamma must lie in [0,1]");
  }

  const std::string mode = get_or<std::string>(j, "mode", "", "document root");
  if (mode == "certify-action") {
    cfg.mode = RunMode::kCertifyAction;
  } else if (mode == "certify-reward-global") {
    cfg.mode = RunMode::kCertifyRewardGlobal;
  } else if (mode == "certify-reward-local") {
    cfg.mode = RunMode::kCertifyRewardLocal;
  } else if (mode == "attack") {
    cfg.mode = RunMode::kAttack;
  } else {
    throw ConfigError("config: mode must be one of certify-action, "
                      "certify-reward-global, certify-reward-local, attack");
  }

  if (const auto a = j.find("certify_action"); a != j.end()) {
    reject_unknown(*a, {"episodes"}, "certify_action");
    cfg.action_episodes = get_or<int>(*a, "episodes", cfg.action_episodes,
                                      "certify_action");
    if (cfg.action_episodes < 1) {
      throw ConfigError("config: certify_action.episodes must be >= 1");
    }
  }

  if (const auto g = j.find("certify_reward_global"); g != j.end()) {
    reject_unknown(*g, {"eps", "p", "order_mode"}, "certify_reward_global");
    cfg.eps_grid = number_or_list(*g, "eps", cfg.eps_grid, "certify_reward_global");
    for (double e : cfg.eps_grid) {
      if (e < 0.0) throw ConfigError("config: certify_reward_global.eps must be >= 0");
    }
    cfg.percentile = get_or<double>(*g, "p", cfg.percentile, "certify_reward_global");
    if (!(cfg.percentile > 0.0) || !(cfg.percentile < 1.0)) {
      throw ConfigError("config: certify_reward_global.p must lie in (0,1)");
    }
    const std::string om = get_or<std::string>(*g, "order_mode", "exact",
                                               "certify_reward_global");
    if (om == "normal") {
      cfg.order_stats_normal = true;
    } else if (om != "exact") {
      throw ConfigError("config: certify_reward_global.order_mode must be exact or "
                        "normal");
    }
  }

  if (const auto l = j.find("certify_reward_local"); l != j.end()) {
    reject_unknown(*l, {"eps_max", "pruning", "max_nodes", "max_seconds"},
                   "certify_reward_local");
    cfg.eps_max = get_or<double>(*l, "eps_max", cfg.eps_max, "certify_reward_local");
    if (!(cfg.eps_max > 0.0)) {
      throw ConfigError("config: certify_reward_local.eps_max must be > 0");
    }
    cfg.pruning = get_or<bool>(*l, "pruning", cfg.pruning, "certify_reward_local");
    const auto nodes = get_or<std::int64_t>(
        *l, "max_nodes", static_cast<std::int64_t>(cfg.max_nodes),
        "certify_reward_local");
    if (nodes < 1) throw ConfigError("config: certify_reward_local.max_nodes must be >= 1");
    cfg.max_nodes = static_cast<std::size_t>(nodes);
    cfg.max_seconds = get_or<double>(*l, "max_seconds", cfg.max_seconds,
                                     "certify_reward_local");
    if (cfg.max_seconds < 0.0) {
      throw ConfigError("config: certify_reward_local.max_seconds must be >= 0");
    }
  }

  if (const auto a = j.find("attack"); a != j.end()) {
    reject_unknown(*a, {"method", "eps", "steps", "trials", "target", "episodes"},
                   "attack");
    cfg.attack_method = get_or<std::string>(*a, "method", cfg.attack_method, "attack");
    if (cfg.attack_method != "random" && cfg.attack_method != "pgd" &&
        cfg.attack_method != "randomized-policy") {
      throw ConfigError("config: attack.method must be random, pgd or "
                        "randomized-policy");
    }
    cfg.eps_grid = number_or_list(*a, "eps", cfg.eps_grid, "attack");
    cfg.attack_steps = get_or<int>(*a, "steps", cfg.attack_steps, "attack");
    if (cfg.attack_steps < 1) throw ConfigError("config: attack.steps must be >= 1");
    cfg.attack_trials = get_or<int>(*a, "trials", cfg.attack_trials, "attack");
    if (cfg.attack_trials < 1) throw ConfigError("config: attack.trials must be >= 1");
    cfg.attack_target = get_or<std::string>(*a, "target", cfg.attack_target, "attack");
    if (cfg.attack_target != "smoothed" && cfg.attack_target != "raw") {
      throw ConfigError("config: attack.target must be smoothed or raw");
    }
    cfg.attack_episodes = get_or<int>(*a, "episodes", cfg.attack_episodes, "attack");
    if (cfg.attack_episodes < 1) {
      throw ConfigError("config: attack.episodes must be >= 1");
    }
  }

  cfg.output = get_or<std::string>(j, "output", cfg.output, "document root");
  if (cfg.output.empty() || cfg.output.find('/') != std::string::npos) {
    throw ConfigError("config: output must be a non-empty file name stem");
  }

  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config_text(buf.str());
}

std::string RunConfig::resolved_json() const {
  json env{{"name", env_name}, {"seed", env_seed}};
  if (env_name == "gridworld") {
    env["width"] = env_width;
    env["height"] = env_height;
    env["goal_x"] = env_goal_x;
    env["goal_y"] = env_goal_y;
  } else if (env_name == "toy_freeway") {
    env["lanes"] = env_lanes;
    env["road_width"] = env_road_width;
  }
  json q;
  if (q_from_weights) {
    q = {{"source", "weights"}, {"path", q_weights_path}};
  } else {
    q = {{"source", "value_iteration"}, {"gamma", q_gamma}, {"tol", q_tol}};
  }
  json range;
  if (explicit_range) {
    range = {{"mode", "explicit"}, {"v_min", v_min}, {"v_max", v_max}};
  } else {
    range = {{"mode", "estimate"}, {"episodes", range_episodes}};
  }
  json doc{{"env", env},
           {"q", q},
           {"smoothing",
            {{"sigma", sigmas},
             {"m", m},
             {"alpha", alpha},
             {"seed", seed},
             {"backend", exact_backend ? "exact" : "mc"},
             {"range", range}}},
           {"horizon", horizon},
           {"gamma", gamma},
           {"mode", to_string(mode)},
           {"output", output}};
  switch (mode) {
    case RunMode::kCertifyAction:
      doc["certify_action"] = {{"episodes", action_episodes}};
      break;
    case RunMode::kCertifyRewardGlobal:
      doc["certify_reward_global"] = {{"eps", eps_grid},
                                      {"p", percentile},
                                      {"order_mode",
                                       order_stats_normal ? "normal" : "exact"}};
      break;
    case RunMode::kCertifyRewardLocal:
      doc["certify_reward_local"] = {{"eps_max", eps_max},
                                     {"pruning", pruning},
                                     {"max_nodes", max_nodes},
                                     {"max_seconds", max_seconds}};
      break;
    case RunMode::kAttack:
      doc["attack"] = {{"method", attack_method},
                       {"eps", eps_grid},
                       {"steps", attack_steps},
                       {"trials", attack_trials},
                       {"target", attack_target},
                       {"episodes", attack_episodes}};
      break;
  }
  return doc.dump();
}

std::string RunConfig::config_hash() const {
  const std::uint64_t h = fnv1a64(resolved_json());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::unique_ptr<Environment> RunConfig::make_env() const {
  try {
    if (env_name == "gridworld") {
      GridWorld::Params p;
      p.width = env_width;
      p.height = env_height;
      p.goal_x = env_goal_x;
      p.goal_y = env_goal_y;
      if (horizon > 0) p.horizon = horizon;
      return std::make_unique<GridWorld>(p);
    }
    if (env_name == "toy_freeway") {
      ToyFreeway::Params p;
      p.lanes = env_lanes;
      p.width = env_road_width;
      if (horizon > 0) p.horizon = horizon;
      return std::make_unique<ToyFreeway>(p);
    }
    if (env_name == "pole_balance") {
      PoleBalance::Params p;
      if (horizon > 0) p.horizon = horizon;
      return std::make_unique<PoleBalance>(p);
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: invalid env parameters: ") + e.what());
  }
  throw ConfigError("config: unknown env '" + env_name + "'");
}

}  // namespace rlcert
