#include "rlcert/smoothing/config.hpp"

#include <algorithm>
#include <numeric>

#include "rlcert/errors.hpp"

namespace rlcert {

void SmoothingConfig::validate() const {
  if (!(sigma > 0.0)) throw DomainError("SmoothingConfig: sigma must be > 0");
  if (m < 2) throw DomainError("SmoothingConfig: m must be >= 2");
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw DomainError("SmoothingConfig: alpha must lie in (0,1)");
  }
  if (!(v_min < v_max)) throw DomainError("SmoothingConfig: v_min must be < v_max");
}

std::vector<int> SmoothedEstimate::ranking() const {
  std::vector<int> order(mean.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return mean[a] > mean[b]; });
  return order;
}

}  // namespace rlcert
