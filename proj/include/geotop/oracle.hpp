#pragma once

// Independent reference implementations used by the test suites and the
// `verify` command. Nothing here shares code with the production sweeps:
// everything is explicit per-threshold labeling by breadth-first search.

#include <cstddef>
#include <vector>

#include "geotop/image.hpp"
#include "geotop/persistence.hpp"

namespace geotop::oracle {

enum class Connectivity { Four, Eight };

struct Labeling {
  std::vector<int> labels;  // -1 for pixels outside the set
  int count = 0;
};

/// Components of the pixels where mask == want.
Labeling label_components(const BinaryImage& image, Connectivity connectivity, bool want = true);

/// Labels of 4-connected background components that do not touch the border.
Labeling label_holes(const BinaryImage& image);

/// (#8-connected foreground components) - (#bounded 4-connected background components).
long components_minus_holes(const BinaryImage& image);

/// Boundary edges of the union of closed unit squares of the given pixels.
std::size_t boundary_edges(std::size_t width, std::size_t height, const std::vector<std::size_t>& pixels);

inline constexpr std::size_t kMaxBruteForceSide = 32;
inline constexpr std::size_t kMaxBruteForceLevels = 64;

/// Superlevel diagram by explicit threshold enumeration with containment
/// matching of components (and of holes, in reverse order). Throws
/// std::invalid_argument beyond 32x32 pixels or 64 distinct values.
PersistenceDiagram brute_force_diagram(const ScalarField& field);

/// Canonically sorted (birth, death, dim) list for multiset comparison.
std::vector<Bar> sorted_bars(const PersistenceDiagram& diagram);

/// Bottleneck distance between the dim-k parts of two diagrams; points may
/// also be matched to the diagonal at cost persistence / 2.
double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b, int dim);

}  // namespace geotop::oracle
