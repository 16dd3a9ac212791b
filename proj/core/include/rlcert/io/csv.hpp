#pragma once

#include <map>
#include <string>
#include <vector>

namespace rlcert {

/// Shortest round-trip decimal form of a double ('.' decimal point, no locale
/// dependence). Identical input bits always yield identical text.
std::string format_double(double v);

/// Writes `content` to `path` atomically (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);

/// One parsed CSV run output: '#'-prefixed provenance lines as key=value
/// pairs, the header row, and the data rows.
struct CsvDocument {
  std::map<std::string, std::string> provenance;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

CsvDocument read_csv(const std::string& path);

}  // namespace rlcert
