#include "geotop/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace geotop {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

void write_feature_csv(std::ostream& out, std::span<const std::string> schema, std::span<const FeatureRow> rows) {
  out << "source_id,label";
  for (const auto& name : schema) out << ',' << csv_escape(name);
  out << '\n';
  char buf[32];
  for (const auto& row : rows) {
    if (row.values.size() != schema.size()) throw std::invalid_argument("write_feature_csv: row width mismatch");
    out << csv_escape(row.source_id) << ',' << row.label;
    for (double v : row.values) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

FeatureTable read_feature_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open feature CSV");
  auto bad = [&](std::size_t line_no, const std::string& what) {
    return std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + what);
  };
  std::string line;
  if (!std::getline(in, line)) throw bad(1, "missing header");
  auto header = csv_split(line);
  if (header.size() < 2 || header[0] != "source_id" || header[1] != "label") {
    throw bad(1, "header must start with source_id,label");
  }
  FeatureTable table;
  table.columns.assign(header.begin() + 2, header.end());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = csv_split(line);
    if (fields.size() != header.size()) throw bad(line_no, "wrong number of columns");
    FeatureRow row;
    row.source_id = fields[0];
    char* end = nullptr;
    const long label = std::strtol(fields[1].c_str(), &end, 10);
    if (end == fields[1].c_str() || *end != '\0') throw bad(line_no, "label is not an integer");
    row.label = static_cast<int>(label);
    row.values.reserve(table.columns.size());
    for (std::size_t k = 2; k < fields.size(); ++k) {
      const double v = std::strtod(fields[k].c_str(), &end);
      if (end == fields[k].c_str() || *end != '\0') throw bad(line_no, "non-numeric feature value");
      row.values.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_curves_csv(std::ostream& out, const LkcCurves& curves) {
  out << "threshold,area,perimeter,euler\n";
  char buf[128];
  for (std::size_t k = 0; k < curves.thresholds.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", curves.thresholds[k], curves.area[k],
                  curves.perimeter[k], curves.euler[k]);
    out << buf;
  }
}

}  // namespace geotop
