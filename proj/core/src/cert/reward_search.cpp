#include "rlcert/cert/reward_search.hpp"

#include <chrono>
#include <cmath>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "rlcert/cert/action.hpp"
#include "rlcert/noise.hpp"

namespace rlcert {

PossibleActions get_actions(const std::vector<double>& radii,
                            const std::vector<int>& order, double eps) {
  if (radii.size() != order.size() || radii.empty() || radii[0] != 0.0) {
    throw DomainError("get_actions: radii must start at 0 and match the ranking");
  }
  PossibleActions out;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (k > 0 && radii[k] < radii[k - 1]) {
      throw DomainError("get_actions: radii must be non-decreasing");
    }
    if (radii[k] <= eps) {
      out.possible.push_back(order[k]);
    } else {
      out.next_critical.emplace_back(radii[k], order[k]);
    }
  }
  return out;
}

double RewardCertificate::bound_at(double eps) const {
  double bound = std::numeric_limits<double>::infinity();
  for (const auto& [e, b] : entries) {
    if (e <= eps) {
      bound = b;
    } else {
      break;
    }
  }
  return bound;
}

std::uint64_t state_noise_stream(const std::string& state_key) {
  return fnv1a64(state_key);
}

double search_confidence(std::size_t attacked_states, double alpha) {
  return std::pow(1.0 - alpha, static_cast<double>(attacked_states));
}

namespace {

struct CachedEstimate {
  std::vector<double> radii;
  std::vector<int> order;
};

struct CriticalEntry {
  double eps;
  std::uint64_t seq;  // FIFO among equal eps
  EnvSnapshot snapshot;
  int depth;
  double prefix_return;
  double discount;  // gamma^depth
  int action;
};

struct EntryAfter {
  bool operator()(const CriticalEntry& a, const CriticalEntry& b) const {
    if (a.eps != b.eps) return a.eps > b.eps;
    return a.seq > b.seq;
  }
};

class Search {
 public:
  Search(Environment& env, const SmoothingBackend& backend, int horizon,
         const RewardSearchOptions& opts)
      : env_(env), backend_(backend), horizon_(horizon), opts_(opts) {
    if (std::isfinite(opts.max_seconds) && opts.max_seconds < 1e9) {
      deadline_ = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(opts.max_seconds));
    } else {
      deadline_ = std::chrono::steady_clock::time_point::max();
    }
    if (opts_.eps_max <= 0.0) {
      throw DomainError("certify_reward_search: eps_max must be > 0");
    }
    if (opts_.enable_pruning && !env.spec().reward_nonnegative) {
      throw UsageError(
          "certify_reward_search: pruning requires a reward-nonnegative environment");
    }
  }

  RewardCertificate run() {
    explore(env_.snapshot(), 0, 0.0, 1.0, -1, 0.0);
    commit(0.0);
    while (!queue_.empty() && queue_.top().eps <= opts_.eps_max) {
      const double cur_eps = queue_.top().eps;
      cert_.stats.critical_eps.push_back(cur_eps);
      while (!queue_.empty() && queue_.top().eps == cur_eps) {
        const CriticalEntry e = queue_.top();
        queue_.pop();
        attacked_keys_.insert(e.snapshot.key);
        explore(e.snapshot, e.depth, e.prefix_return, e.discount, e.action, cur_eps);
      }
      commit(cur_eps);
    }
    cert_.stats.eps_covered = opts_.eps_max;
    cert_.stats.complete = true;
    finish_stats();
    return cert_;
  }

 private:
  void commit(double eps) {
    if (running_min_ < last_bound_) {
      cert_.entries.emplace_back(eps, running_min_);
      last_bound_ = running_min_;
    }
  }

  void finish_stats() {
    cert_.stats.attacked_state_count = attacked_keys_.size();
    cert_.stats.confidence =
        search_confidence(attacked_keys_.size(), backend_.config().alpha);
    cert_.stats.benign_return = benign_return_;
  }

  void check_budget(double cur_eps) {
    bool exceeded = cert_.stats.nodes_expanded > opts_.max_nodes;
    if (!exceeded && cert_.stats.nodes_expanded % 64 == 0 &&
        std::chrono::steady_clock::now() > deadline_) {
      exceeded = true;
    }
    if (!exceeded) return;
    cert_.stats.eps_covered = cur_eps;  // entries are sound for eps < cur_eps
    cert_.stats.complete = false;
    finish_stats();
    throw PartialResultError("certify_reward_search: budget exhausted at eps=" +
                                 std::to_string(cur_eps),
                             cert_);
  }

  CachedEstimate estimate_at(const EnvSnapshot& snap, const Observation& obs) {
    if (opts_.use_memo) {
      const auto it = memo_.find(snap.key);
      if (it != memo_.end()) {
        ++cert_.stats.memo_hits;
        return it->second;
      }
    }
    const SmoothedEstimate est = backend_.estimate(obs, state_noise_stream(snap.key));
    CachedEstimate cached;
    cached.radii = extended_radii(est, backend_.config());
    cached.order = est.ranking();
    if (opts_.use_memo) memo_.emplace(snap.key, cached);
    return cached;
  }

  void leaf(double value) {
    if (!have_benign_) {
      benign_return_ = value;
      have_benign_ = true;
    }
    running_min_ = std::min(running_min_, value);
  }

  /// Expands the node at `snap`. With forced_action >= 0, only that branch is
  /// grown (the node's other branches were handled when it was first seen);
  /// otherwise every action possible under `eps` is grown and the rest are
  /// queued at their critical radii.
  void explore(const EnvSnapshot& snap, int depth, double prefix, double discount,
               int forced_action, double eps) {
    ++cert_.stats.nodes_expanded;
    check_budget(eps);
    if (depth >= horizon_) {
      leaf(prefix);
      return;
    }

    std::vector<int> actions;
    if (forced_action >= 0) {
      actions.push_back(forced_action);
    } else {
      env_.restore(snap);
      const CachedEstimate cached = estimate_at(snap, env_.observation());
      PossibleActions possible = get_actions(cached.radii, cached.order, eps);
      actions = std::move(possible.possible);
      for (const auto& [radius, action] : possible.next_critical) {
        queue_.push(CriticalEntry{radius, next_seq_++, snap, depth, prefix, discount,
                                  action});
      }
      if (actions.size() > 1) attacked_keys_.insert(snap.key);
    }

    for (int action : actions) {
      env_.restore(snap);
      const StepResult sr = env_.step(action);
      const double value = prefix + discount * sr.reward;
      if (sr.done) {
        leaf(value);
        continue;
      }
      if (depth + 1 >= horizon_) {
        leaf(value);
        continue;
      }
      if (opts_.enable_pruning && value >= running_min_) {
        // Rewards are nonnegative, so no completion of this prefix can fall
        // below the recorded minimum.
        continue;
      }
      explore(env_.snapshot(), depth + 1, value, discount * opts_.gamma, -1, eps);
    }
  }

  Environment& env_;
  const SmoothingBackend& backend_;
  int horizon_;
  RewardSearchOptions opts_;
  std::chrono::steady_clock::time_point deadline_;

  std::priority_queue<CriticalEntry, std::vector<CriticalEntry>, EntryAfter> queue_;
  std::unordered_map<std::string, CachedEstimate> memo_;
  std::unordered_set<std::string> attacked_keys_;
  std::uint64_t next_seq_ = 0;

  RewardCertificate cert_;
  double running_min_ = std::numeric_limits<double>::infinity();
  double last_bound_ = std::numeric_limits<double>::infinity();
  double benign_return_ = 0.0;
  bool have_benign_ = false;
};

class BruteForce {
 public:
  BruteForce(Environment& env, const SmoothingBackend& backend, int horizon,
             double eps, double gamma, std::size_t max_nodes)
      : env_(env),
        backend_(backend),
        horizon_(horizon),
        eps_(eps),
        gamma_(gamma),
        max_nodes_(max_nodes) {}

  double run() { return visit(env_.snapshot(), 0, 0.0, 1.0); }

 private:
  double visit(const EnvSnapshot& snap, int depth, double prefix, double discount) {
    if (++nodes_ > max_nodes_) {
      throw ResourceError("brute_force_lower_bound: enumeration cap exceeded");
    }
    if (depth >= horizon_) return prefix;
    env_.restore(snap);
    const SmoothedEstimate est =
        backend_.estimate(env_.observation(), state_noise_stream(snap.key));
    const std::vector<double> radii = extended_radii(est, backend_.config());
    const PossibleActions possible = get_actions(radii, est.ranking(), eps_);

    double best = std::numeric_limits<double>::infinity();
    for (int action : possible.possible) {
      env_.restore(snap);
      const StepResult sr = env_.step(action);
      const double value = prefix + discount * sr.reward;
      if (sr.done || depth + 1 >= horizon_) {
        best = std::min(best, value);
      } else {
        best = std::min(best, visit(env_.snapshot(), depth + 1, value,
                                    discount * gamma_));
      }
    }
    return best;
  }

  Environment& env_;
  const SmoothingBackend& backend_;
  int horizon_;
  double eps_;
  double gamma_;
  std::size_t max_nodes_;
  std::size_t nodes_ = 0;
};

}  // namespace

RewardCertificate certify_reward_search(Environment& env,
                                        const SmoothingBackend& backend, int horizon,
                                        const RewardSearchOptions& opts) {
  Search search(env, backend, horizon, opts);
  return search.run();
}

double brute_force_lower_bound(Environment& env, const SmoothingBackend& backend,
                               int horizon, double eps, double gamma,
                               std::size_t max_nodes) {
  if (eps < 0.0) throw DomainError("brute_force_lower_bound: eps must be >= 0");
  BruteForce bf(env, backend, horizon, eps, gamma, max_nodes);
  return bf.run();
}

}  // namespace rlcert
