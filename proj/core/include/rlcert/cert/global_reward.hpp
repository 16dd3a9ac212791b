#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rlcert/env/environment.hpp"
#include "rlcert/qfunc/q_function.hpp"

namespace rlcert {

/// Returns of m rollouts of the noise-randomized policy: at each step the
/// greedy policy of q acts on the observation plus one fresh Gaussian draw.
struct TrajectoryReturns {
  std::vector<double> returns;         // rollout order
  std::vector<double> sorted_returns;  // non-decreasing
  double sigma = 0.0;
  int horizon = 0;
  std::uint64_t seed = 0;
};

/// Joint certificate for one perturbation magnitude.
struct GlobalCertificate {
  double epsilon = 0.0;
  double expectation_bound = 0.0;
  std::optional<double> percentile_bound;
  double p = 0.5;
  double p_prime = 0.5;
  std::optional<std::size_t> order_index;  // 1-based rank of the bounding return
  double alpha = 0.05;
};

enum class OrderStatsMode { kExact, kNormal };

/// Runs m independent noise-randomized rollouts from the environment's
/// current initial state (restored before each rollout), each for at most
/// `horizon` steps, accumulating gamma-discounted returns. Noise draw (i,t,d)
/// comes from the counter stream keyed by `seed`, so results are independent
/// of evaluation order. sigma == 0 reproduces the noiseless policy.
TrajectoryReturns sample_randomized_trajectories(Environment& env, const QFunction& q,
                                                 double sigma, std::size_t m,
                                                 int horizon, double gamma,
                                                 std::uint64_t seed, int jobs = 1);

/// Expectation lower bound on the perturbed return of the randomized policy:
///   (sample mean - hoeffding_delta) - L * eps * sqrt(H)
/// with L = (J_max - J_min)/sigma * sqrt(2/pi). May fall below J_min; the
/// bound is then valid but vacuous and reported as-is.
double expectation_bound(const TrajectoryReturns& tr, double eps, double alpha,
                         const EnvSpec& spec);

/// Percentile shift under perturbation: Phi(Phi^-1(p) - eps*sqrt(H)/sigma).
double p_prime(double p, double eps, int horizon, double sigma);

/// Largest k in [1, m] whose binomial lower tail stays within alpha:
///   sum_{i=0}^{k-1} C(m,i) p'^i (1-p')^{m-i} <= alpha.
/// Exact mode evaluates the tail in log space; normal mode uses the
/// N(m p', m p'(1-p')) approximation with continuity correction and binary
/// search. Empty when even k = 1 fails (epsilon above the certifiable
/// ceiling for this m and alpha).
std::optional<std::size_t> compute_order_stats(std::size_t m, double p_prime,
                                               double alpha, OrderStatsMode mode);

/// Percentile lower bound: the k-th smallest sampled return when k exists.
GlobalCertificate percentile_bound(const TrajectoryReturns& tr, double p, double eps,
                                   double alpha,
                                   OrderStatsMode mode = OrderStatsMode::kExact);

}  // namespace rlcert
