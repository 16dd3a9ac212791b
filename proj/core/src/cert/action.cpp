#include "rlcert/cert/action.hpp"

#include <algorithm>
#include <cmath>

#include "rlcert/errors.hpp"
#include "rlcert/normal.hpp"

namespace rlcert {

namespace {

constexpr double kProbFloor = 1e-9;

double normalized(double value, const SmoothingConfig& cfg) {
  const double q = (value - cfg.v_min) / (cfg.v_max - cfg.v_min);
  return std::clamp(q, kProbFloor, 1.0 - kProbFloor);
}

double radius_between(double top_lower, double other_upper, const SmoothingConfig& cfg) {
  if (top_lower <= other_upper) return 0.0;
  const double q1 = normalized(top_lower, cfg);
  const double q2 = normalized(other_upper, cfg);
  const double r =
      0.5 * cfg.sigma * (std_normal_inv_cdf(q1) - std_normal_inv_cdf(q2));
  return std::max(0.0, r);
}

}  // namespace

double certified_radius(const SmoothedEstimate& est, const SmoothingConfig& cfg) {
  return radius_between(est.lower[est.top_action], est.upper[est.runner_up], cfg);
}

std::vector<double> extended_radii(const SmoothedEstimate& est,
                                   const SmoothingConfig& cfg) {
  const std::vector<int> order = est.ranking();
  std::vector<double> radii(order.size(), 0.0);
  const double top_lower = est.lower[order[0]];
  for (std::size_t k = 1; k < order.size(); ++k) {
    radii[k] = radius_between(top_lower, est.upper[order[k]], cfg);
  }
  return radii;
}

std::pair<std::vector<ActionCertificate>, double> certify_episode(
    Environment& env, const SmoothingBackend& backend, int horizon) {
  std::vector<ActionCertificate> certs;
  double benign_return = 0.0;
  Observation obs = env.observation();
  for (int t = 0; t < horizon; ++t) {
    ActionCertificate cert;
    cert.t = t;
    cert.estimate = backend.estimate(obs, static_cast<std::uint64_t>(t));
    cert.extended_radii = extended_radii(cert.estimate, backend.config());
    cert.radius = cert.extended_radii.size() > 1 ? cert.extended_radii[1] : 0.0;
    cert.chosen_action = cert.estimate.top_action;
    const StepResult sr = env.step(cert.chosen_action);
    benign_return += sr.reward;
    obs = sr.observation;
    certs.push_back(std::move(cert));
    if (sr.done) break;
  }
  return {std::move(certs), benign_return};
}

double certified_ratio(const std::vector<ActionCertificate>& certs, double r) {
  if (certs.empty()) throw DomainError("certified_ratio: empty certificate list");
  std::size_t count = 0;
  for (const auto& c : certs) {
    if (c.radius >= r) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(certs.size());
}

}  // namespace rlcert
