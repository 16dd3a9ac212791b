#include "rlcert/noise.hpp"

#include "rlcert/normal.hpp"

namespace rlcert {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t CounterRng::bits(std::uint64_t stream, std::uint64_t step,
                               std::uint64_t index) const {
  std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ (stream + 0x9e3779b97f4a7c15ULL));
  h = mix64(h ^ (step + 0x9e3779b97f4a7c15ULL));
  h = mix64(h ^ (index + 0x9e3779b97f4a7c15ULL));
  return h;
}

double CounterRng::uniform(std::uint64_t stream, std::uint64_t step,
                           std::uint64_t index) const {
  // (k + 0.5) / 2^64 lies strictly inside (0,1).
  return (static_cast<double>(bits(stream, step, index)) + 0.5) * 0x1.0p-64;
}

double CounterRng::gaussian(std::uint64_t stream, std::uint64_t step,
                            std::uint64_t index) const {
  return std_normal_inv_cdf(uniform(stream, step, index));
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace rlcert
