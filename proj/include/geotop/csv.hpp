#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "geotop/lkc_features.hpp"

namespace geotop {

/// One image's features as written to a feature CSV.
struct FeatureRow {
  std::string source_id;
  int label = 0;
  std::vector<double> values;
};

/// Header: source_id,label,<schema...>. Values use 17 significant digits so
/// a read-back is exact.
void write_feature_csv(std::ostream& out, std::span<const std::string> schema, std::span<const FeatureRow> rows);

struct FeatureTable {
  std::vector<std::string> columns;  // schema slots only
  std::vector<FeatureRow> rows;
};

/// Throws std::runtime_error (with the path) on malformed input.
FeatureTable read_feature_csv(const std::filesystem::path& path);

/// threshold,area,perimeter,euler (scaled values).
void write_curves_csv(std::ostream& out, const LkcCurves& curves);

std::string csv_escape(const std::string& field);
std::vector<std::string> csv_split(const std::string& line);

}  // namespace geotop
