#include "rlcert/smoothing/exact.hpp"

#include <cmath>

#include "rlcert/errors.hpp"
#include "rlcert/normal.hpp"

namespace rlcert {

std::vector<double> smooth_q_exact(const GridQ& q, const Observation& obs,
                                   double sigma) {
  if (!(sigma > 0.0)) throw DomainError("smooth_q_exact: sigma must be > 0");
  if (static_cast<int>(obs.size()) != q.obs_dim()) {
    throw DomainError("smooth_q_exact: observation dimension mismatch");
  }
  constexpr std::size_t kCellCap = 1000000;
  if (q.num_cells() > kCellCap) {
    throw ResourceError("smooth_q_exact: cell count exceeds enumeration cap");
  }

  // Per-dimension interval probabilities under N(obs_d, sigma^2).
  const int dims = q.obs_dim();
  std::vector<std::vector<double>> probs(static_cast<std::size_t>(dims));
  for (int d = 0; d < dims; ++d) {
    const auto& edges = q.edges()[d];
    auto& p = probs[d];
    p.resize(edges.size() + 1);
    double prev_cdf = 0.0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const double cdf = std_normal_cdf((edges[i] - obs[d]) / sigma);
      p[i] = cdf - prev_cdf;
      prev_cdf = cdf;
    }
    p[edges.size()] = 1.0 - prev_cdf;
  }

  const int num_actions = q.num_actions();
  std::vector<double> result(static_cast<std::size_t>(num_actions), 0.0);
  std::vector<std::size_t> idx(static_cast<std::size_t>(dims), 0);
  while (true) {
    double weight = 1.0;
    std::size_t cell = 0;
    for (int d = 0; d < dims; ++d) {
      weight *= probs[d][idx[d]];
      cell = cell * probs[d].size() + idx[d];
    }
    if (weight > 0.0) {
      const double* row = &q.table()[cell * static_cast<std::size_t>(num_actions)];
      for (int a = 0; a < num_actions; ++a) result[a] += weight * row[a];
    }
    int d = dims - 1;
    for (; d >= 0; --d) {
      if (++idx[d] < probs[d].size()) break;
      idx[d] = 0;
    }
    if (d < 0) break;
  }
  return result;
}

}  // namespace rlcert
