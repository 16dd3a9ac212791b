#include "rlcert/smoothing/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "rlcert/errors.hpp"
#include "rlcert/noise.hpp"
#include "rlcert/normal.hpp"
#include "rlcert/parallel.hpp"

namespace rlcert {

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::size_t block = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * block;
    const std::size_t hi = std::min(n, lo + block);
    if (lo >= hi) break;
    threads.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : threads) t.join();
}

SmoothedEstimate smooth_q_mc(const QFunction& q, const Observation& obs,
                             const SmoothingConfig& cfg, std::uint64_t stream,
                             int jobs) {
  cfg.validate();
  const int num_actions = q.num_actions();
  const std::size_t dim = obs.size();
  for (double v : obs) {
    if (!std::isfinite(v)) throw DomainError("smooth_q_mc: observation must be finite");
  }

  const CounterRng rng{cfg.seed};
  // Per-sample values land in a buffer and are reduced in index order, so the
  // result does not depend on how the loop is partitioned.
  std::vector<double> samples(cfg.m * static_cast<std::size_t>(num_actions));
  parallel_for(
      cfg.m, jobs,
      [&](std::size_t i) {
        thread_local std::vector<double> noisy;
        noisy.assign(obs.begin(), obs.end());
        for (std::size_t d = 0; d < dim; ++d) {
          noisy[d] += cfg.sigma * rng.gaussian(stream, i, d);
        }
        const QValues qv = q.eval(noisy, cfg.v_min, cfg.v_max);
        std::copy(qv.values.begin(), qv.values.end(),
                  samples.begin() + static_cast<std::ptrdiff_t>(
                                        i * static_cast<std::size_t>(num_actions)));
      });

  SmoothedEstimate est;
  est.m_used = cfg.m;
  est.mean.assign(static_cast<std::size_t>(num_actions), 0.0);
  for (std::size_t i = 0; i < cfg.m; ++i) {
    const double* row = &samples[i * static_cast<std::size_t>(num_actions)];
    for (int a = 0; a < num_actions; ++a) est.mean[a] += row[a];
  }
  for (double& v : est.mean) v /= static_cast<double>(cfg.m);

  const double delta = hoeffding_delta(cfg.m, cfg.alpha, cfg.v_max - cfg.v_min);
  est.lower.resize(est.mean.size());
  est.upper.resize(est.mean.size());
  for (std::size_t a = 0; a < est.mean.size(); ++a) {
    est.lower[a] = std::clamp(est.mean[a] - delta, cfg.v_min, cfg.v_max);
    est.upper[a] = std::clamp(est.mean[a] + delta, cfg.v_min, cfg.v_max);
  }

  est.top_action = 0;
  for (int a = 1; a < num_actions; ++a) {
    if (est.mean[a] > est.mean[est.top_action]) est.top_action = a;
  }
  est.runner_up = est.top_action == 0 ? 1 : 0;
  for (int a = 0; a < num_actions; ++a) {
    if (a == est.top_action) continue;
    if (est.mean[a] > est.mean[est.runner_up]) est.runner_up = a;
  }
  return est;
}

}  // namespace rlcert
