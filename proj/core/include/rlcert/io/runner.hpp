#pragma once

#include <string>
#include <vector>

#include "rlcert/io/run_config.hpp"

namespace rlcert {

struct RunOutput {
  std::vector<std::string> files;
};

/// Executes one run config and writes its outputs (one file set per sigma)
/// under out_dir. Every output opens with a provenance block carrying the
/// resolved config, its hash, and the effective parameters; identical
/// (config, seed) produce byte-identical bodies. A exhausted search budget
/// still writes the partial certificate before the error propagates.
RunOutput run_experiment(const RunConfig& cfg, const std::string& out_dir,
                         int jobs = 1);

}  // namespace rlcert
