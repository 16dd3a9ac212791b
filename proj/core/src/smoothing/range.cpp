#include "rlcert/smoothing/range.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "rlcert/errors.hpp"

namespace rlcert {

std::pair<double, double> estimate_range(Environment& env, const QFunction& q,
                                         int episodes, int horizon,
                                         std::uint64_t seed_base) {
  if (episodes < 1) throw DomainError("estimate_range: episodes must be >= 1");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::vector<double> values(static_cast<std::size_t>(q.num_actions()));
  for (int e = 0; e < episodes; ++e) {
    Observation obs = env.reset(seed_base + static_cast<std::uint64_t>(e));
    for (int t = 0; t < horizon; ++t) {
      q.eval_raw(obs, values);
      for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      int best = 0;
      for (int a = 1; a < q.num_actions(); ++a) {
        if (values[a] > values[best]) best = a;
      }
      const StepResult sr = env.step(best);
      obs = sr.observation;
      if (sr.done) break;
    }
  }
  constexpr double kMinWidth = 1e-6;
  if (hi - lo < kMinWidth) {
    const double mid = 0.5 * (hi + lo);
    lo = mid - kMinWidth;
    hi = mid + kMinWidth;
  }
  return {lo, hi};
}

}  // namespace rlcert
