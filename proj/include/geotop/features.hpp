#pragma once

#include <span>
#include <string>
#include <vector>

namespace geotop {

/// Fixed-length, fixed-order vector; schema names every slot and points at
/// static storage owned by the producing module.
struct FeatureVector {
  std::vector<double> values;
  std::span<const std::string> schema;

  std::size_t size() const { return values.size(); }
};

}  // namespace geotop
