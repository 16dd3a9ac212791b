#include "rlcert/cert/global_reward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rlcert/errors.hpp"
#include "rlcert/noise.hpp"
#include "rlcert/normal.hpp"
#include "rlcert/parallel.hpp"

namespace rlcert {

TrajectoryReturns sample_randomized_trajectories(Environment& env, const QFunction& q,
                                                 double sigma, std::size_t m,
                                                 int horizon, double gamma,
                                                 std::uint64_t seed, int jobs) {
  if (m < 2) throw DomainError("sample_randomized_trajectories: m must be >= 2");
  if (sigma < 0.0) throw DomainError("sample_randomized_trajectories: sigma must be >= 0");

  const EnvSnapshot start = env.snapshot();
  const CounterRng rng{seed};

  TrajectoryReturns tr;
  tr.returns.assign(m, 0.0);
  tr.sigma = sigma;
  tr.horizon = horizon;
  tr.seed = seed;

  parallel_for(m, jobs, [&](std::size_t i) {
    // Rollouts mutate a private clone; the shared env is only read.
    std::unique_ptr<Environment> local = env.clone();
    local->restore(start);
    Observation obs = local->observation();
    std::vector<double> noisy(obs.size());
    double ret = 0.0;
    double discount = 1.0;
    for (int t = 0; t < horizon; ++t) {
      noisy.assign(obs.begin(), obs.end());
      if (sigma > 0.0) {
        for (std::size_t d = 0; d < noisy.size(); ++d) {
          noisy[d] += sigma * rng.gaussian(i, static_cast<std::uint64_t>(t), d);
        }
      }
      const int action = q.greedy_action(noisy);
      const StepResult sr = local->step(action);
      ret += discount * sr.reward;
      discount *= gamma;
      obs = sr.observation;
      if (sr.done) break;
    }
    tr.returns[i] = ret;
  });

  env.restore(start);
  tr.sorted_returns = tr.returns;
  std::sort(tr.sorted_returns.begin(), tr.sorted_returns.end());
  return tr;
}

double expectation_bound(const TrajectoryReturns& tr, double eps, double alpha,
                         const EnvSpec& spec) {
  if (eps < 0.0) throw DomainError("expectation_bound: eps must be >= 0");
  const std::size_t m = tr.returns.size();
  double mean = 0.0;
  for (double r : tr.returns) mean += r;
  mean /= static_cast<double>(m);

  const double range = spec.return_max - spec.return_min;
  const double lower = mean - hoeffding_delta(m, alpha, range);
  if (eps == 0.0) return lower;
  if (!(tr.sigma > 0.0)) return -std::numeric_limits<double>::infinity();
  const double lipschitz = range / tr.sigma * kSqrtTwoOverPi;
  return lower - lipschitz * eps * std::sqrt(static_cast<double>(tr.horizon));
}

double p_prime(double p, double eps, int horizon, double sigma) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw DomainError("p_prime: p must lie strictly in (0,1)");
  }
  if (eps < 0.0) throw DomainError("p_prime: eps must be >= 0");
  if (eps == 0.0) return p;
  if (!(sigma > 0.0)) return 0.0;
  const double shift = eps * std::sqrt(static_cast<double>(horizon)) / sigma;
  return std_normal_cdf(std_normal_inv_cdf(p) - shift);
}

namespace {

/// Exact scan: the binomial lower-tail prefix sums are strictly increasing,
/// so the first prefix above alpha ends the search.
std::optional<std::size_t> order_stats_exact(std::size_t m, double p, double alpha) {
  if (p <= 0.0) return std::nullopt;  // tail mass 1 at i=0
  if (p >= 1.0) return m;             // every proper prefix is 0
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double lgamma_m1 = std::lgamma(static_cast<double>(m) + 1.0);
  double cdf = 0.0;
  std::size_t best = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double di = static_cast<double>(i);
    const double log_term = lgamma_m1 - std::lgamma(di + 1.0) -
                            std::lgamma(static_cast<double>(m - i) + 1.0) +
                            di * log_p + static_cast<double>(m - i) * log_q;
    cdf += std::exp(log_term);
    if (cdf <= alpha) {
      best = i + 1;  // prefix over 0..i admits k = i+1
    } else {
      break;
    }
  }
  if (best == 0) return std::nullopt;
  return best;
}

std::optional<std::size_t> order_stats_normal(std::size_t m, double p, double alpha) {
  if (p <= 0.0) return std::nullopt;
  if (p >= 1.0) return m;
  const double mu = static_cast<double>(m) * p;
  const double sd = std::sqrt(static_cast<double>(m) * p * (1.0 - p));
  const auto tail_ok = [&](std::size_t k) {
    // P[X <= k-1] with continuity correction.
    const double z = (static_cast<double>(k) - 1.0 + 0.5 - mu) / sd;
    return std_normal_cdf(z) <= alpha;
  };
  if (!tail_ok(1)) return std::nullopt;
  std::size_t lo = 1, hi = m;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (tail_ok(mid)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

}  // namespace

std::optional<std::size_t> compute_order_stats(std::size_t m, double p_prime,
                                               double alpha, OrderStatsMode mode) {
  if (m < 1) throw DomainError("compute_order_stats: m must be >= 1");
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw DomainError("compute_order_stats: alpha must lie in (0,1)");
  }
  return mode == OrderStatsMode::kExact ? order_stats_exact(m, p_prime, alpha)
                                        : order_stats_normal(m, p_prime, alpha);
}

GlobalCertificate percentile_bound(const TrajectoryReturns& tr, double p, double eps,
                                   double alpha, OrderStatsMode mode) {
  GlobalCertificate cert;
  cert.epsilon = eps;
  cert.p = p;
  cert.alpha = alpha;
  cert.p_prime = p_prime(p, eps, tr.horizon, tr.sigma);
  cert.order_index = compute_order_stats(tr.returns.size(), cert.p_prime, alpha, mode);
  if (cert.order_index) {
    cert.percentile_bound = tr.sorted_returns[*cert.order_index - 1];
  }
  return cert;
}

}  // namespace rlcert
