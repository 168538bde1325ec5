#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "geotop/oracle.hpp"

namespace geotop::oracle {

namespace {

struct Identity {
  double value;       // birth for components, lowest interior value for holes
  std::size_t pixel;  // tie-break pixel
};

}  // namespace

PersistenceDiagram brute_force_diagram(const ScalarField& field) {
  if (field.width() > kMaxBruteForceSide || field.height() > kMaxBruteForceSide) {
    throw std::invalid_argument("brute_force_diagram: field larger than 32x32");
  }
  std::set<double, std::greater<>> distinct(field.values().begin(), field.values().end());
  if (distinct.size() > kMaxBruteForceLevels) {
    throw std::invalid_argument("brute_force_diagram: more than 64 distinct values");
  }
  PersistenceDiagram diagram;
  diagram.direction = Direction::Superlevel;
  if (field.empty()) return diagram;
  const std::vector<double> levels(distinct.begin(), distinct.end());  // descending
  const std::size_t n = field.size();

  // Components, descending thresholds.
  {
    Labeling prev;
    std::vector<Identity> prev_id;
    for (double t : levels) {
      const Labeling cur = label_components(excursion_set(field, t), Connectivity::Eight);
      std::vector<std::set<int>> children(static_cast<std::size_t>(cur.count));
      std::vector<std::size_t> first_pixel(static_cast<std::size_t>(cur.count), n);
      for (std::size_t p = 0; p < n; ++p) {
        const int l = cur.labels[p];
        if (l < 0) continue;
        first_pixel[l] = std::min(first_pixel[l], p);
        if (!prev.labels.empty() && prev.labels[p] >= 0) children[l].insert(prev.labels[p]);
      }
      std::vector<Identity> cur_id(static_cast<std::size_t>(cur.count));
      for (int l = 0; l < cur.count; ++l) {
        if (children[l].empty()) {
          cur_id[l] = {t, first_pixel[l]};
          continue;
        }
        int eldest = *children[l].begin();
        for (int c : children[l]) {
          const auto& a = prev_id[c];
          const auto& e = prev_id[eldest];
          if (a.value > e.value || (a.value == e.value && a.pixel < e.pixel)) eldest = c;
        }
        for (int c : children[l]) {
          if (c != eldest) diagram.bars.push_back({prev_id[c].value, t, 0, false});
        }
        cur_id[l] = prev_id[eldest];
      }
      prev = cur;
      prev_id = std::move(cur_id);
    }
    for (const auto& id : prev_id) diagram.bars.push_back({id.value, levels.back(), 0, true});
  }

  // Holes, ascending thresholds: a hole at one level lies inside a single
  // complement component at the next higher level.
  {
    Labeling prev;
    std::vector<Identity> prev_id;
    double prev_t = 0.0;
    for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
      const double t = *it;
      const BinaryImage set = excursion_set(field, t);
      const Labeling complement = label_components(set, Connectivity::Four, false);
      const Labeling holes = label_holes(set);
      // Map complement components to hole labels (-1 = touches the border).
      std::vector<int> hole_of(static_cast<std::size_t>(complement.count), -1);
      for (std::size_t p = 0; p < n; ++p) {
        if (complement.labels[p] >= 0) hole_of[complement.labels[p]] = holes.labels[p];
      }
      std::vector<std::set<int>> children(static_cast<std::size_t>(holes.count));
      std::vector<std::set<int>> to_outside(1);
      if (!prev.labels.empty()) {
        for (std::size_t p = 0; p < n; ++p) {
          const int c = prev.labels[p];
          if (c < 0) continue;
          const int parent = hole_of[complement.labels[p]];
          (parent < 0 ? to_outside[0] : children[parent]).insert(c);
        }
      }
      for (int c : to_outside[0]) diagram.bars.push_back({prev_t, prev_id[c].value, 1, false});
      std::vector<Identity> cur_id(static_cast<std::size_t>(holes.count));
      for (int l = 0; l < holes.count; ++l) {
        if (children[l].empty()) {
          Identity id{std::numeric_limits<double>::infinity(), n};
          for (std::size_t p = 0; p < n; ++p) {
            if (holes.labels[p] == l && field[p] < id.value) id = {field[p], p};
          }
          cur_id[l] = id;
          continue;
        }
        int eldest = *children[l].begin();
        for (int c : children[l]) {
          const auto& a = prev_id[c];
          const auto& e = prev_id[eldest];
          if (a.value < e.value || (a.value == e.value && a.pixel < e.pixel)) eldest = c;
        }
        for (int c : children[l]) {
          if (c != eldest) diagram.bars.push_back({prev_t, prev_id[c].value, 1, false});
        }
        cur_id[l] = prev_id[eldest];
      }
      prev = holes;
      prev_id = std::move(cur_id);
      prev_t = t;
    }
    // Above the maximum every pixel is background and touches the border.
    for (const auto& id : prev_id) diagram.bars.push_back({prev_t, id.value, 1, false});
  }
  return diagram;
}

}  // namespace geotop::oracle
