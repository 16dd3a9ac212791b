#pragma once

#include <memory>

#include "rlcert/qfunc/grid_q.hpp"
#include "rlcert/smoothing/config.hpp"
#include "rlcert/smoothing/monte_carlo.hpp"

namespace rlcert {

/// Source of smoothed Q estimates for the certifiers. Pure given
/// (observation, stream): calling twice returns identical results, so search
/// code may cache estimates or not without changing any certificate.
class SmoothingBackend {
 public:
  virtual ~SmoothingBackend() = default;
  virtual SmoothedEstimate estimate(const Observation& obs,
                                    std::uint64_t stream) const = 0;
  virtual const SmoothingConfig& config() const = 0;
  virtual const QFunction& q() const = 0;
};

/// Seeded Monte Carlo smoothing (the deployable path).
class McSmoothingBackend final : public SmoothingBackend {
 public:
  McSmoothingBackend(const QFunction& q, SmoothingConfig cfg, int jobs = 1);

  SmoothedEstimate estimate(const Observation& obs, std::uint64_t stream) const override;
  const SmoothingConfig& config() const override { return cfg_; }
  const QFunction& q() const override { return *q_; }

 private:
  std::unique_ptr<QFunction> q_;
  SmoothingConfig cfg_;
  int jobs_;
};

/// Closed-form smoothing of a clipped GridQ: lower = mean = upper (zero
/// statistical slack), deterministic without any seed. Oracle route for
/// soundness tests and for certificates on exactly-enumerable Q tables.
class ExactSmoothingBackend final : public SmoothingBackend {
 public:
  ExactSmoothingBackend(const GridQ& q, SmoothingConfig cfg);

  SmoothedEstimate estimate(const Observation& obs, std::uint64_t stream) const override;
  const SmoothingConfig& config() const override { return cfg_; }
  const QFunction& q() const override { return clipped_; }

 private:
  GridQ clipped_;
  SmoothingConfig cfg_;
};

}  // namespace rlcert
