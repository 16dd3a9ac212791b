#pragma once

#include <string>
#include <vector>

namespace rlcert {

/// Aggregates the run outputs found in `results_dir` into plot-ready
/// long-format CSVs under `out_dir`, one per figure family:
///   report_radius_curves.csv    env,sigma,episode,t,action,radius
///   report_certified_ratio.csv  env,sigma,r,ratio
///   report_reward_bounds.csv    env,sigma,epsilon,bound_type,value
///   report_attacks.csv          env,sigma,epsilon,method,seed,attacked_return
/// Files of one family must share their schema; mismatches raise FormatError
/// listing the offending files, and an input directory without any run CSVs
/// is an error.
std::vector<std::string> write_report(const std::string& results_dir,
                                      const std::string& out_dir);

}  // namespace rlcert
