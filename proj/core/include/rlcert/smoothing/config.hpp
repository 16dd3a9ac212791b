#pragma once

#include <cstdint>
#include <vector>

namespace rlcert {

/// Parameters of Gaussian local smoothing: noise scale, Monte Carlo budget,
/// one-sided confidence level, and the clip range applied to raw Q outputs.
struct SmoothingConfig {
  double sigma = 0.1;
  std::size_t m = 10000;
  double alpha = 0.05;
  double v_min = 0.0;
  double v_max = 1.0;
  std::uint64_t seed = 0;

  void validate() const;  // throws DomainError
};

/// Per-action Monte Carlo means of the clipped Q-function plus one-sided
/// Hoeffding bounds at the config's level, clamped to the clip range.
struct SmoothedEstimate {
  std::vector<double> mean;
  std::vector<double> lower;
  std::vector<double> upper;
  std::size_t m_used = 0;
  int top_action = 0;
  int runner_up = 0;

  /// Action indices sorted by mean descending, lowest index among ties.
  std::vector<int> ranking() const;
};

}  // namespace rlcert
