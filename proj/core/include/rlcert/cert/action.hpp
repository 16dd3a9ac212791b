#pragma once

#include <utility>
#include <vector>

#include "rlcert/env/environment.hpp"
#include "rlcert/smoothing/backend.hpp"

namespace rlcert {

/// One time step's certificate: the action the smoothed policy takes, the
/// certified radius below which it cannot be flipped, and the extended radii
/// sequence (radius k bounds perturbations that keep the action within the
/// top k+1 smoothed actions). extended_radii[0] == 0 and the sequence is
/// non-decreasing; radius == extended_radii[1].
struct ActionCertificate {
  int t = 0;
  int chosen_action = 0;
  double radius = 0.0;
  std::vector<double> extended_radii;
  SmoothedEstimate estimate;
};

/// Certified radius from an estimate: sigma/2 * (Phi^-1(q1) - Phi^-1(q2))
/// with q = (value - v_min)/(v_max - v_min), using the Hoeffding lower bound
/// of the top action and the upper bound of the runner-up. Normalized values
/// are clamped to [1e-9, 1-1e-9] before inversion; a non-positive margin
/// certifies nothing and yields 0 (the action is still taken).
double certified_radius(const SmoothedEstimate& est, const SmoothingConfig& cfg);

/// Full non-decreasing radius sequence, one entry per action rank; entry 0
/// is 0 and entry 1 equals certified_radius.
std::vector<double> extended_radii(const SmoothedEstimate& est,
                                   const SmoothingConfig& cfg);

/// Runs the smoothed policy for at most `horizon` steps from the
/// environment's current state, certifying each visited state. Returns the
/// certificates and the undiscounted benign return.
std::pair<std::vector<ActionCertificate>, double> certify_episode(
    Environment& env, const SmoothingBackend& backend, int horizon);

/// Fraction of steps with radius >= r.
double certified_ratio(const std::vector<ActionCertificate>& certs, double r);

}  // namespace rlcert
