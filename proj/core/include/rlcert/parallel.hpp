#pragma once

#include <cstddef>
#include <functional>

namespace rlcert {

/// Runs fn(i) for i in [0, n) on up to `jobs` threads, splitting the index
/// range into contiguous blocks. With jobs <= 1 it degenerates to a plain
/// loop. Callers are responsible for making fn(i) independent across i.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace rlcert
