#include "rlcert/qfunc/weights_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rlcert/errors.hpp"

namespace rlcert {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

const json& require(const json& j, const char* field, const char* context) {
  const auto it = j.find(field);
  if (it == j.end()) {
    throw FormatError(std::string("weights file: missing '") + field + "' in " +
                      context);
  }
  return *it;
}

json grid_to_json(const GridQ& q) {
  return json{{"format_version", kFormatVersion},
              {"kind", "grid"},
              {"num_actions", q.num_actions()},
              {"edges", q.edges()},
              {"table", q.table()}};
}

json mlp_to_json(const MlpQ& q) {
  json layers = json::array();
  for (const auto& l : q.layers()) {
    layers.push_back(json{{"rows", l.rows},
                          {"cols", l.cols},
                          {"weights", l.weights},
                          {"bias", l.bias}});
  }
  return json{{"format_version", kFormatVersion}, {"kind", "mlp"}, {"layers", layers}};
}

std::unique_ptr<QFunction> from_json(const json& j) {
  const json& version = require(j, "format_version", "document root");
  if (!version.is_number_integer() || version.get<int>() != kFormatVersion) {
    throw FormatError("weights file: unsupported format_version " + version.dump() +
                      ", expected " + std::to_string(kFormatVersion));
  }
  const std::string kind = require(j, "kind", "document root").get<std::string>();
  try {
    if (kind == "grid") {
      auto edges = require(j, "edges", "grid weights")
                       .get<std::vector<std::vector<double>>>();
      auto table = require(j, "table", "grid weights").get<std::vector<double>>();
      const int num_actions = require(j, "num_actions", "grid weights").get<int>();
      return std::make_unique<GridQ>(std::move(edges), std::move(table), num_actions);
    }
    if (kind == "mlp") {
      std::vector<MlpQ::Layer> layers;
      for (const auto& lj : require(j, "layers", "mlp weights")) {
        MlpQ::Layer l;
        l.rows = require(lj, "rows", "mlp layer").get<int>();
        l.cols = require(lj, "cols", "mlp layer").get<int>();
        l.weights = require(lj, "weights", "mlp layer").get<std::vector<double>>();
        l.bias = require(lj, "bias", "mlp layer").get<std::vector<double>>();
        layers.push_back(std::move(l));
      }
      return std::make_unique<MlpQ>(std::move(layers));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("weights file: malformed field: ") + e.what());
  } catch (const DomainError& e) {
    throw FormatError(std::string("weights file: inconsistent shapes: ") + e.what());
  }
  throw FormatError("weights file: unknown kind '" + kind + "'");
}

}  // namespace

std::string weights_to_string(const QFunction& q) {
  if (const auto* g = dynamic_cast<const GridQ*>(&q)) return grid_to_json(*g).dump(2);
  if (const auto* m = dynamic_cast<const MlpQ*>(&q)) return mlp_to_json(*m).dump(2);
  throw UnsupportedError("weights_to_string: unknown Q-function kind");
}

std::unique_ptr<QFunction> weights_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("weights file: ") + e.what());
  }
  return from_json(j);
}

void save_weights(const QFunction& q, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("save_weights: cannot open " + path);
  out << weights_to_string(q) << '\n';
  if (!out) throw FormatError("save_weights: write failed for " + path);
}

std::unique_ptr<QFunction> load_weights(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("load_weights: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return weights_from_string(buf.str());
}

}  // namespace rlcert
