#include "rlcert/smoothing/backend.hpp"

#include "rlcert/smoothing/exact.hpp"

namespace rlcert {

McSmoothingBackend::McSmoothingBackend(const QFunction& q, SmoothingConfig cfg, int jobs)
    : q_(q.clone()), cfg_(cfg), jobs_(jobs) {
  cfg_.validate();
}

SmoothedEstimate McSmoothingBackend::estimate(const Observation& obs,
                                              std::uint64_t stream) const {
  return smooth_q_mc(*q_, obs, cfg_, stream, jobs_);
}

ExactSmoothingBackend::ExactSmoothingBackend(const GridQ& q, SmoothingConfig cfg)
    : clipped_(q.clipped(cfg.v_min, cfg.v_max)), cfg_(cfg) {
  cfg_.validate();
}

SmoothedEstimate ExactSmoothingBackend::estimate(const Observation& obs,
                                                 std::uint64_t /*stream*/) const {
  SmoothedEstimate est;
  est.mean = smooth_q_exact(clipped_, obs, cfg_.sigma);
  est.lower = est.mean;
  est.upper = est.mean;
  est.m_used = 0;
  est.top_action = 0;
  const int num_actions = static_cast<int>(est.mean.size());
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
