#pragma once

#include <vector>

#include "rlcert/env/environment.hpp"
#include "rlcert/qfunc/grid_q.hpp"

namespace rlcert {

/// Exact Gaussian smoothing of a piecewise-constant Q-function: per action,
/// sum over cells of the table value times the product over dimensions of
/// Phi((edge_hi - s_d)/sigma) - Phi((edge_lo - s_d)/sigma). Exact up to Phi
/// precision and independent of any seed; used as the seed-free oracle the
/// Monte Carlo path is checked against. Throws ResourceError when the cell
/// count exceeds the enumeration cap (1e6).
std::vector<double> smooth_q_exact(const GridQ& q, const Observation& obs,
                                   double sigma);

}  // namespace rlcert
