#pragma once

#include "rlcert/env/environment.hpp"
#include "rlcert/qfunc/q_function.hpp"
#include "rlcert/smoothing/config.hpp"

namespace rlcert {

/// Monte Carlo estimate of the Gaussian-smoothed Q-values at `obs`: draws m
/// noise vectors from the counter-based stream (cfg.seed, stream, i, d),
/// evaluates the clipped Q-function on each noisy observation (one noise batch
/// shared by all actions), and attaches one-sided Hoeffding bounds.
///
/// `stream` decorrelates call sites (time step, state key hash); identical
/// (cfg, obs, stream) gives bit-identical results regardless of `jobs`.
SmoothedEstimate smooth_q_mc(const QFunction& q, const Observation& obs,
                             const SmoothingConfig& cfg, std::uint64_t stream = 0,
                             int jobs = 1);

}  // namespace rlcert
