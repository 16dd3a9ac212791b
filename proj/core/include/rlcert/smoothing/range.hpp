#pragma once

#include <cstdint>
#include <utility>

#include "rlcert/env/environment.hpp"
#include "rlcert/qfunc/q_function.hpp"

namespace rlcert {

/// Estimates the raw Q output range by running `episodes` greedy rollouts
/// (reset seeds seed_base, seed_base+1, ...) of at most `horizon` steps each
/// and taking the min/max over every action value at every visited state.
/// Clipping to the estimate keeps downstream certificates sound even when the
/// visited set misses extremes. A degenerate range (width < 1e-6) is widened
/// symmetrically to width 2e-6 so normalized values stay well defined.
std::pair<double, double> estimate_range(Environment& env, const QFunction& q,
                                         int episodes, int horizon,
                                         std::uint64_t seed_base);

}  // namespace rlcert
