#include "rlcert/io/report.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "rlcert/errors.hpp"
#include "rlcert/io/csv.hpp"

namespace rlcert {

namespace {

namespace fs = std::filesystem;

int column_index(const CsvDocument& doc, const std::string& name) {
  const auto it = std::find(doc.columns.begin(), doc.columns.end(), name);
  if (it == doc.columns.end()) return -1;
  return static_cast<int>(it - doc.columns.begin());
}

std::string provenance_or(const CsvDocument& doc, const std::string& key,
                          const std::string& fallback) {
  const auto it = doc.provenance.find(key);
  return it == doc.provenance.end() ? fallback : it->second;
}

void require_columns(const CsvDocument& doc, const std::vector<std::string>& needed,
                     const std::string& path, std::vector<std::string>& offenders) {
  for (const auto& c : needed) {
    if (column_index(doc, c) < 0) {
      offenders.push_back(path + " (missing column '" + c + "')");
      return;
    }
  }
}

}  // namespace

std::vector<std::string> write_report(const std::string& results_dir,
                                      const std::string& out_dir) {
  if (!fs::is_directory(results_dir)) {
    throw FormatError("report: not a directory: " + results_dir);
  }
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(results_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      paths.push_back(entry.path().string());
    }
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) {
    throw FormatError("report: no run CSV files in " + results_dir);
  }

  std::map<std::string, std::vector<std::pair<std::string, CsvDocument>>> families;
  for (const auto& path : paths) {
    CsvDocument doc = read_csv(path);
    const std::string mode = provenance_or(doc, "mode", "");
    if (mode.empty()) continue;  // not a run output
    families[mode].emplace_back(path, std::move(doc));
  }
  if (families.empty()) {
    throw FormatError("report: no files with run provenance in " + results_dir);
  }

  std::vector<std::string> offenders;
  std::ostringstream radius_rows, ratio_rows, bounds_rows, attack_rows;
  bool have_radius = false, have_bounds = false, have_attacks = false;

  if (const auto fam = families.find("certify-action"); fam != families.end()) {
    // Header consistency within the family.
    const auto& head = fam->second.front().second.columns;
    for (const auto& [path, doc] : fam->second) {
      require_columns(doc, {"episode", "t", "action", "radius"}, path, offenders);
      if (doc.columns != head) {
        offenders.push_back(path + " (header differs within certify-action family)");
      }
    }
    if (offenders.empty()) {
      have_radius = true;
      for (const auto& [path, doc] : fam->second) {
        const std::string env = provenance_or(doc, "env", "?");
        const std::string sigma = provenance_or(doc, "sigma", "?");
        const int ce = column_index(doc, "episode");
        const int ct = column_index(doc, "t");
        const int ca = column_index(doc, "action");
        const int cr = column_index(doc, "radius");
        std::vector<double> radii;
        for (const auto& row : doc.rows) {
          radius_rows << env << ',' << sigma << ',' << row[ce] << ',' << row[ct]
                      << ',' << row[ca] << ',' << row[cr] << '\n';
          radii.push_back(std::stod(row[cr]));
        }
        // Step-function certified ratio over the distinct observed radii.
        std::vector<double> grid = radii;
        grid.push_back(0.0);
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        for (double r : grid) {
          std::size_t count = 0;
          for (double v : radii) {
            if (v >= r) ++count;
          }
          ratio_rows << env << ',' << sigma << ',' << format_double(r) << ','
                     << format_double(radii.empty()
                                          ? 0.0
                                          : static_cast<double>(count) /
                                                static_cast<double>(radii.size()))
                     << '\n';
        }
      }
    }
  }

  if (const auto fam = families.find("certify-reward-global"); fam != families.end()) {
    for (const auto& [path, doc] : fam->second) {
      require_columns(doc, {"epsilon", "exp_bound", "perc_bound"}, path, offenders);
    }
    if (offenders.empty()) {
      have_bounds = true;
      for (const auto& [path, doc] : fam->second) {
        const std::string env = provenance_or(doc, "env", "?");
        const std::string sigma = provenance_or(doc, "sigma", "?");
        const int c_eps = column_index(doc, "epsilon");
        const int c_exp = column_index(doc, "exp_bound");
        const int c_perc = column_index(doc, "perc_bound");
        for (const auto& row : doc.rows) {
          bounds_rows << env << ',' << sigma << ',' << row[c_eps]
                      << ",expectation," << row[c_exp] << '\n';
          if (!row[c_perc].empty()) {
            bounds_rows << env << ',' << sigma << ',' << row[c_eps] << ",percentile,"
                        << row[c_perc] << '\n';
          }
        }
      }
    }
  }

  if (const auto fam = families.find("certify-reward-local"); fam != families.end()) {
    for (const auto& [path, doc] : fam->second) {
      require_columns(doc, {"epsilon", "lower_bound"}, path, offenders);
    }
    if (offenders.empty()) {
      have_bounds = true;
      for (const auto& [path, doc] : fam->second) {
        const std::string env = provenance_or(doc, "env", "?");
        const std::string sigma = provenance_or(doc, "sigma", "?");
        const int c_eps = column_index(doc, "epsilon");
        const int c_b = column_index(doc, "lower_bound");
        for (const auto& row : doc.rows) {
          bounds_rows << env << ',' << sigma << ',' << row[c_eps] << ",absolute,"
                      << row[c_b] << '\n';
        }
      }
    }
  }

  if (const auto fam = families.find("attack"); fam != families.end()) {
    for (const auto& [path, doc] : fam->second) {
      require_columns(doc, {"epsilon", "attacked_return", "method", "seed"}, path,
                      offenders);
    }
    if (offenders.empty()) {
      have_attacks = true;
      for (const auto& [path, doc] : fam->second) {
        const std::string env = provenance_or(doc, "env", "?");
        const std::string sigma = provenance_or(doc, "sigma", "?");
        const int c_eps = column_index(doc, "epsilon");
        const int c_ret = column_index(doc, "attacked_return");
        const int c_m = column_index(doc, "method");
        const int c_s = column_index(doc, "seed");
        for (const auto& row : doc.rows) {
          attack_rows << env << ',' << sigma << ',' << row[c_eps] << ',' << row[c_m]
                      << ',' << row[c_s] << ',' << row[c_ret] << '\n';
        }
      }
    }
  }

  if (!offenders.empty()) {
    std::string msg = "report: incompatible run outputs:";
    for (const auto& o : offenders) msg += "\n  " + o;
    throw FormatError(msg);
  }

  fs::create_directories(out_dir);
  std::vector<std::string> written;
  const auto emit = [&](const std::string& name, const std::string& header,
                        const std::string& rows) {
    const std::string path = out_dir + "/" + name;
    write_file_atomic(path, header + "\n" + rows);
    written.push_back(path);
  };
  if (have_radius) {
    emit("report_radius_curves.csv", "env,sigma,episode,t,action,radius",
         radius_rows.str());
    emit("report_certified_ratio.csv", "env,sigma,r,ratio", ratio_rows.str());
  }
  if (have_bounds) {
    emit("report_reward_bounds.csv", "env,sigma,epsilon,bound_type,value",
         bounds_rows.str());
  }
  if (have_attacks) {
    emit("report_attacks.csv", "env,sigma,epsilon,method,seed,attacked_return",
         attack_rows.str());
  }
  if (written.empty()) {
    throw FormatError("report: no recognizable run outputs in " + results_dir);
  }
  return written;
}

}  // namespace rlcert
