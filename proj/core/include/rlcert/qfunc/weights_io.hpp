#pragma once

#include <memory>
#include <string>

#include "rlcert/qfunc/grid_q.hpp"
#include "rlcert/qfunc/mlp_q.hpp"

namespace rlcert {

/// Weights file format: a JSON document
///   { "format_version": 1, "kind": "grid"|"mlp", ... }
/// where grid carries {"num_actions", "edges", "table"} and mlp carries
/// {"layers": [{"rows","cols","weights","bias"}, ...]}. Numbers round-trip
/// bit-exactly. Loading rejects unknown versions and names missing fields.
void save_weights(const QFunction& q, const std::string& path);

std::unique_ptr<QFunction> load_weights(const std::string& path);

std::string weights_to_string(const QFunction& q);
std::unique_ptr<QFunction> weights_from_string(const std::string& text);

}  // namespace rlcert
