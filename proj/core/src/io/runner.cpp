#include "rlcert/io/runner.hpp"

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "rlcert/attack/attack.hpp"
#include "rlcert/cert/action.hpp"
#include "rlcert/cert/global_reward.hpp"
#include "rlcert/cert/reward_search.hpp"
#include "rlcert/env/discrete_model.hpp"
#include "rlcert/errors.hpp"
#include "rlcert/io/csv.hpp"
#include "rlcert/noise.hpp"
#include "rlcert/qfunc/value_iteration.hpp"
#include "rlcert/qfunc/weights_io.hpp"
#include "rlcert/smoothing/range.hpp"

namespace rlcert {

namespace {

using nlohmann::json;

std::unique_ptr<QFunction> build_q(const RunConfig& cfg, Environment& env) {
  if (cfg.q_from_weights) {
    auto q = load_weights(cfg.q_weights_path);
    if (q->obs_dim() != env.spec().obs_dim ||
        q->num_actions() != env.spec().num_actions) {
      throw ConfigError("config: loaded weights do not match the environment shape");
    }
    return q;
  }
  DiscreteModel model;
  if (const auto* gw = dynamic_cast<const GridWorld*>(&env)) {
    model = discretize(*gw);
  } else if (const auto* fw = dynamic_cast<const ToyFreeway*>(&env)) {
    model = discretize(*fw);
  } else {
    throw ConfigError("config: q.source=value_iteration requires a gridworld or "
                      "toy_freeway environment; load weights instead");
  }
  ValueIterationOptions opts;
  opts.tol = cfg.q_tol;
  const std::vector<double> table = value_iteration(model, cfg.q_gamma, opts);
  return std::make_unique<GridQ>(make_grid_q(model, table));
}

std::unique_ptr<SmoothingBackend> build_backend(const RunConfig& cfg,
                                                const QFunction& q,
                                                const SmoothingConfig& scfg, int jobs) {
  if (cfg.exact_backend) {
    const auto* grid = dynamic_cast<const GridQ*>(&q);
    if (grid == nullptr) {
      throw ConfigError("config: smoothing.backend=exact requires a grid Q-function");
    }
    return std::make_unique<ExactSmoothingBackend>(*grid, scfg);
  }
  return std::make_unique<McSmoothingBackend>(q, scfg, jobs);
}

struct Provenance {
  const RunConfig& cfg;
  const SmoothingConfig& scfg;
  int horizon;

  void write(std::ostringstream& out,
             const std::vector<std::pair<std::string, std::string>>& extra = {}) const {
    out << "# rlcert-run v1\n";
    out << "# config=" << cfg.resolved_json() << '\n';
    out << "# config_hash=" << cfg.config_hash() << '\n';
    out << "# mode=" << to_string(cfg.mode) << '\n';
    out << "# env=" << cfg.env_name << '\n';
    out << "# env_seed=" << cfg.env_seed << '\n';
    out << "# sigma=" << format_double(scfg.sigma) << '\n';
    out << "# m=" << scfg.m << '\n';
    out << "# alpha=" << format_double(scfg.alpha) << '\n';
    out << "# seed=" << scfg.seed << '\n';
    out << "# horizon=" << horizon << '\n';
    out << "# gamma=" << format_double(cfg.gamma) << '\n';
    out << "# v_min=" << format_double(scfg.v_min) << '\n';
    out << "# v_max=" << format_double(scfg.v_max) << '\n';
    for (const auto& [k, v] : extra) out << "# " << k << '=' << v << '\n';
  }
};

std::string run_certify_action(const RunConfig& cfg, Environment& env,
                               const QFunction& q, const SmoothingConfig& scfg,
                               int horizon, int jobs) {
  std::ostringstream body;
  std::vector<std::string> benign;
  const int num_actions = env.spec().num_actions;
  std::ostringstream rows;
  rows << "episode,t,action,radius";
  for (int k = 0; k < num_actions; ++k) rows << ",r" << k;
  rows << '\n';
  for (int e = 0; e < cfg.action_episodes; ++e) {
    SmoothingConfig ecfg = scfg;
    ecfg.seed = mix64(scfg.seed + static_cast<std::uint64_t>(e));
    const auto backend = build_backend(cfg, q, ecfg, jobs);
    env.reset(cfg.env_seed + static_cast<std::uint64_t>(e));
    const auto [certs, benign_return] = certify_episode(env, *backend, horizon);
    benign.push_back(format_double(benign_return));
    for (const auto& c : certs) {
      rows << e << ',' << c.t << ',' << c.chosen_action << ','
           << format_double(c.radius);
      for (double r : c.extended_radii) rows << ',' << format_double(r);
      rows << '\n';
    }
  }
  std::string benign_list;
  for (std::size_t i = 0; i < benign.size(); ++i) {
    if (i) benign_list += ',';
    benign_list += benign[i];
  }
  Provenance{cfg, scfg, horizon}.write(body, {{"benign_returns", benign_list}});
  body << rows.str();
  return body.str();
}

std::string run_certify_reward_global(const RunConfig& cfg, Environment& env,
                                      const QFunction& q, const SmoothingConfig& scfg,
                                      int horizon, int jobs) {
  env.reset(cfg.env_seed);
  const TrajectoryReturns tr = sample_randomized_trajectories(
      env, q, scfg.sigma, scfg.m, horizon, cfg.gamma, scfg.seed, jobs);
  const OrderStatsMode mode =
      cfg.order_stats_normal ? OrderStatsMode::kNormal : OrderStatsMode::kExact;

  std::ostringstream body;
  Provenance{cfg, scfg, horizon}.write(body);
  body << "epsilon,exp_bound,perc_bound,p,p_prime,k,m,sigma,alpha\n";
  for (double eps : cfg.eps_grid) {
    const double exp_bound = expectation_bound(tr, eps, scfg.alpha, env.spec());
    const GlobalCertificate cert =
        percentile_bound(tr, cfg.percentile, eps, scfg.alpha, mode);
    body << format_double(eps) << ',' << format_double(exp_bound) << ',';
    if (cert.percentile_bound) body << format_double(*cert.percentile_bound);
    body << ',' << format_double(cert.p) << ',' << format_double(cert.p_prime) << ',';
    if (cert.order_index) body << *cert.order_index;
    body << ',' << scfg.m << ',' << format_double(scfg.sigma) << ','
         << format_double(scfg.alpha) << '\n';
  }
  return body.str();
}

json certificate_to_json(const RewardCertificate& cert) {
  json entries = json::array();
  for (const auto& [eps, bound] : cert.entries) {
    entries.push_back(json{{"epsilon", eps}, {"lower_bound", bound}});
  }
  return json{{"entries", entries},
              {"stats",
               {{"nodes_expanded", cert.stats.nodes_expanded},
                {"memo_hits", cert.stats.memo_hits},
                {"attacked_state_count", cert.stats.attacked_state_count},
                {"confidence", cert.stats.confidence},
                {"benign_return", cert.stats.benign_return},
                {"eps_covered", cert.stats.eps_covered},
                {"complete", cert.stats.complete}}}};
}

std::string local_csv(const RunConfig& cfg, const SmoothingConfig& scfg, int horizon,
                      const RewardCertificate& cert) {
  std::ostringstream body;
  Provenance{cfg, scfg, horizon}.write(
      body, {{"benign_return", format_double(cert.stats.benign_return)},
             {"eps_covered", format_double(cert.stats.eps_covered)},
             {"complete", cert.stats.complete ? "1" : "0"}});
  body << "epsilon,lower_bound\n";
  for (const auto& [eps, bound] : cert.entries) {
    body << format_double(eps) << ',' << format_double(bound) << '\n';
  }
  return body.str();
}

std::string run_attack(const RunConfig& cfg, Environment& env, const QFunction& q,
                       const SmoothingConfig& scfg, int horizon, int jobs) {
  const auto backend = build_backend(cfg, q, scfg, jobs);
  std::ostringstream body;
  Provenance{cfg, scfg, horizon}.write(body);
  body << "epsilon,attacked_return,method,seed\n";
  for (double eps : cfg.eps_grid) {
    for (int e = 0; e < cfg.attack_episodes; ++e) {
      AttackConfig attack;
      attack.epsilon = eps;
      attack.steps = cfg.attack_steps;
      attack.trials = cfg.attack_trials;
      attack.target = cfg.attack_target == "raw" ? AttackTarget::kRaw
                                                 : AttackTarget::kSmoothed;
      attack.seed = mix64(scfg.seed + 0xa77acull + static_cast<std::uint64_t>(e));
      env.reset(cfg.env_seed);
      double ret = 0.0;
      if (cfg.attack_method == "pgd") {
        const auto* mlp = dynamic_cast<const MlpQ*>(&q);
        if (mlp == nullptr) {
          throw ConfigError("config: attack.method=pgd requires mlp weights");
        }
        ret = pgd_attack_episode(env, *mlp, attack, *backend, horizon, cfg.gamma);
      } else if (cfg.attack_method == "randomized-policy") {
        ret = attacked_randomized_episode(env, q, scfg.sigma, attack, horizon,
                                          cfg.gamma, static_cast<std::uint64_t>(e));
      } else {
        ret = random_attack_episode(env, attack, *backend, horizon, cfg.gamma);
      }
      body << format_double(eps) << ',' << format_double(ret) << ','
           << cfg.attack_method << ',' << e << '\n';
    }
  }
  return body.str();
}

}  // namespace

RunOutput run_experiment(const RunConfig& cfg, const std::string& out_dir, int jobs) {
  std::filesystem::create_directories(out_dir);
  RunOutput out;

  const auto env = cfg.make_env();
  const int horizon = cfg.horizon > 0 ? cfg.horizon : env->spec().horizon;
  const auto q = build_q(cfg, *env);

  double v_min = cfg.v_min;
  double v_max = cfg.v_max;
  if (!cfg.explicit_range) {
    const auto range_env = env->clone();
    std::tie(v_min, v_max) =
        estimate_range(*range_env, *q, cfg.range_episodes, horizon, cfg.env_seed);
  }

  for (std::size_t si = 0; si < cfg.sigmas.size(); ++si) {
    SmoothingConfig scfg;
    scfg.sigma = cfg.sigmas[si];
    scfg.m = cfg.m;
    scfg.alpha = cfg.alpha;
    scfg.seed = cfg.seed;
    scfg.v_min = v_min;
    scfg.v_max = v_max;
    scfg.validate();

    const std::string stem =
        out_dir + "/" + cfg.output + "_s" + std::to_string(si);

    switch (cfg.mode) {
      case RunMode::kCertifyAction: {
        write_file_atomic(stem + ".csv",
                          run_certify_action(cfg, *env, *q, scfg, horizon, jobs));
        out.files.push_back(stem + ".csv");
        break;
      }
      case RunMode::kCertifyRewardGlobal: {
        write_file_atomic(
            stem + ".csv",
            run_certify_reward_global(cfg, *env, *q, scfg, horizon, jobs));
        out.files.push_back(stem + ".csv");
        break;
      }
      case RunMode::kCertifyRewardLocal: {
        const auto backend = build_backend(cfg, *q, scfg, jobs);
        env->reset(cfg.env_seed);
        RewardSearchOptions opts;
        opts.eps_max = cfg.eps_max;
        opts.gamma = cfg.gamma;
        opts.enable_pruning = cfg.pruning && env->spec().reward_nonnegative;
        opts.max_nodes = cfg.max_nodes;
        if (cfg.max_seconds > 0.0) opts.max_seconds = cfg.max_seconds;
        json doc;
        try {
          const RewardCertificate cert =
              certify_reward_search(*env, *backend, horizon, opts);
          doc = certificate_to_json(cert);
          write_file_atomic(stem + ".csv", local_csv(cfg, scfg, horizon, cert));
        } catch (const PartialResultError& e) {
          // Persist the partially certified range, then report the cap.
          doc = certificate_to_json(e.certificate);
          doc["stats"]["error"] = e.what();
          write_file_atomic(stem + ".csv",
                            local_csv(cfg, scfg, horizon, e.certificate));
          doc["provenance"] = json::parse(cfg.resolved_json());
          doc["provenance"]["config_hash"] = cfg.config_hash();
          write_file_atomic(stem + ".json", doc.dump(2) + "\n");
          out.files.push_back(stem + ".csv");
          out.files.push_back(stem + ".json");
          throw;
        }
        doc["provenance"] = json::parse(cfg.resolved_json());
        doc["provenance"]["config_hash"] = cfg.config_hash();
        write_file_atomic(stem + ".json", doc.dump(2) + "\n");
        out.files.push_back(stem + ".csv");
        out.files.push_back(stem + ".json");
        break;
      }
      case RunMode::kAttack: {
        write_file_atomic(stem + ".csv",
                          run_attack(cfg, *env, *q, scfg, horizon, jobs));
        out.files.push_back(stem + ".csv");
        break;
      }
    }
  }
  return out;
}

}  // namespace rlcert
