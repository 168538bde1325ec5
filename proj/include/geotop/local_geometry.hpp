#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "geotop/image.hpp"
#include "geotop/persistence.hpp"

namespace geotop {

/// Geometry of one superlevel connected component while it is alive.
/// Series are indexed by the shared ascending threshold grid starting at
/// first_index; a component is alive at t when birth >= t > death (the
/// essential one while birth >= t). Tracks of components that live entirely
/// between two grid thresholds have empty series.
struct ComponentTrack {
  std::size_t id = 0;
  Bar bar;
  std::size_t first_index = 0;
  std::vector<std::int64_t> area;
  std::vector<std::int64_t> perimeter;
  /// Track that absorbed this one at its death (none for the essential track).
  std::optional<std::size_t> absorbed_into;

  bool alive_at(std::size_t grid_index) const {
    return grid_index >= first_index && grid_index < first_index + area.size();
  }
};

struct ComponentTracking {
  std::vector<double> thresholds;  // ascending, same grid as lkc_curves
  std::vector<ComponentTrack> tracks;  // ordered by birth in the sweep
};

/// Descending sweep with per-root area and incrementally updated perimeter
/// (+4 per activated pixel, -2 per already active 4-neighbour). Merges follow
/// the same elder rule as compute_persistence, so tracks correspond to the
/// H0 bars one to one.
ComponentTracking track_components(const ScalarField& field, std::size_t n_thresholds = 200);

struct ComponentSummary {
  std::size_t track_id = 0;
  double birth = 0.0;
  double death = 0.0;
  double persistence = 0.0;
  std::int64_t max_area = 0;
  std::int64_t max_perimeter = 0;
  double area_persistence = 0.0;  // max_area * persistence
};

/// One row per track, sorted by persistence descending (ties by track id).
std::vector<ComponentSummary> component_report(const ComponentTracking& tracking);

/// Rows track_id,threshold,area,perimeter for every alive grid point.
void write_tracks_csv(std::ostream& out, const ComponentTracking& tracking);
/// Rows track_id,birth,death,persistence,max_area,max_perimeter,area_persistence,absorbed_into.
void write_track_bars_csv(std::ostream& out, const ComponentTracking& tracking);

}  // namespace geotop
