#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "geotop/image.hpp"

namespace geotop {

enum class Direction { Superlevel, Sublevel };

struct Bar {
  double birth = 0.0;
  double death = 0.0;
  int dim = 0;
  /// The one dim-0 class that never merges; its death is capped at the
  /// field's final filtration value (global min for superlevel).
  bool essential = false;

  double persistence() const { return birth > death ? birth - death : death - birth; }
  bool operator==(const Bar&) const = default;
};

/// Superlevel diagrams satisfy birth >= death for every bar, sublevel
/// diagrams birth <= death. Zero-persistence bars are never stored, except
/// the essential bar of a constant field.
struct PersistenceDiagram {
  std::vector<Bar> bars;
  Direction direction = Direction::Superlevel;

  std::vector<Bar> of_dim(int dim) const;
  std::size_t count(int dim) const;
};

/// Cubical filtration of a pixel grid (T-construction). Pixels are the top
/// cells; every edge and vertex enters together with its first incident
/// pixel, which makes the active set 8-connected and its complement
/// 4-connected. Values are held internally in sublevel form: a superlevel
/// filtration of f is the sublevel filtration of -f.
class Filtration {
 public:
  static Filtration build(const ScalarField& field, Direction direction);

  const ScalarField& field() const { return field_; }
  Direction direction() const { return direction_; }

  /// Pixel values after direction normalization (negated for superlevel).
  const std::vector<double>& normalized() const { return normalized_; }

  // Cell grid of the complex: (2h+1) x (2w+1); pixel (r, c) sits at
  // (2r+1, 2c+1), vertices at (even, even), edges at mixed parity.
  std::size_t cell_rows() const { return 2 * field_.height() + 1; }
  std::size_t cell_cols() const { return 2 * field_.width() + 1; }
  int cell_dim(std::size_t cell_row, std::size_t cell_col) const;
  /// Filtration value of a cell, reported in the field's own units.
  double cell_value(std::size_t cell_row, std::size_t cell_col) const;

 private:
  Filtration(ScalarField field, Direction direction, std::vector<double> normalized)
      : field_(std::move(field)), direction_(direction), normalized_(std::move(normalized)) {}

  ScalarField field_;
  Direction direction_;
  std::vector<double> normalized_;
};

inline Filtration build_filtration(const ScalarField& field, Direction direction) {
  return Filtration::build(field, direction);
}

/// Dimension-0 bars by a union-find sweep over pixels with the elder rule
/// (ties to the smaller row-major index of the birth pixel); dimension-1
/// bars by the dual sweep over the 4-connected complement with a virtual
/// border node.
PersistenceDiagram compute_persistence(const Filtration& filtration);

inline PersistenceDiagram superlevel_diagram(const ScalarField& field) {
  return compute_persistence(Filtration::build(field, Direction::Superlevel));
}

struct Betti {
  long beta0 = 0;
  long beta1 = 0;
  bool operator==(const Betti&) const = default;
};

/// Betti numbers of the excursion set at t (superlevel: birth >= t > death;
/// sublevel: birth <= t < death). The essential bar counts once t reaches
/// its birth.
Betti betti_at(const PersistenceDiagram& diagram, double t);

struct BettiProfile {
  std::vector<double> thresholds;
  std::vector<long> beta0;
  std::vector<long> beta1;
};

BettiProfile betti_profile(const PersistenceDiagram& diagram, const std::vector<double>& thresholds);

/// JSON array of {"birth", "death", "dim"} objects; the essential bar also
/// carries "essential": true.
std::string diagram_to_json(const PersistenceDiagram& diagram);
PersistenceDiagram diagram_from_json(const std::string& text, Direction direction);

/// CSV with header bar_id,dim,birth,death.
void write_barcode_csv(std::ostream& out, const PersistenceDiagram& diagram);

}  // namespace geotop
