#pragma once

#include <cstdint>
#include <string_view>

namespace rlcert {

/// 64-bit finalizer (SplitMix64). Statistically strong enough to decorrelate
/// counter keys; not cryptographic.
std::uint64_t mix64(std::uint64_t x);

/// Stateless counter-based random stream. A draw is addressed by
/// (seed, stream, step, index); evaluation order never affects values, so
/// sample loops can be partitioned across workers freely.
struct CounterRng {
  std::uint64_t seed = 0;

  std::uint64_t bits(std::uint64_t stream, std::uint64_t step, std::uint64_t index) const;

  /// Uniform draw on the open interval (0,1).
  double uniform(std::uint64_t stream, std::uint64_t step, std::uint64_t index) const;

  /// Standard normal draw via the inverse-CDF transform of uniform().
  double gaussian(std::uint64_t stream, std::uint64_t step, std::uint64_t index) const;
};

/// FNV-1a hash of a string, used to derive per-state noise streams from
/// snapshot keys.
std::uint64_t fnv1a64(std::string_view s);

}  // namespace rlcert
