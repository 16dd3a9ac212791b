#include "rlcert/io/csv.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rlcert/errors.hpp"

namespace rlcert {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("write_file_atomic: cannot open " + tmp);
    out << content;
    if (!out) throw FormatError("write_file_atomic: write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw FormatError("write_file_atomic: rename to " + path + " failed");
}

CsvDocument read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("read_csv: cannot open " + path);
  CsvDocument doc;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      if (!body.empty() && body[0] == ' ') body = body.substr(1);
      const auto eq = body.find('=');
      if (eq != std::string::npos) {
        doc.provenance[body.substr(0, eq)] = body.substr(eq + 1);
      }
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (line.back() == ',') fields.emplace_back();
    if (!have_header) {
      doc.columns = std::move(fields);
      have_header = true;
    } else {
      doc.rows.push_back(std::move(fields));
    }
  }
  if (!have_header) throw FormatError("read_csv: no header row in " + path);
  return doc;
}

}  // namespace rlcert
