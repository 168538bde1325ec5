#include "geotop/local_geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "geotop/lkc_features.hpp"

namespace geotop {

namespace {

struct Root {
  std::size_t birth_pos = 0;  // position of the birth pixel in the sweep
  std::int64_t area = 0;
  std::int64_t perimeter = 0;
  std::size_t track = 0;  // index into the working track list
};

struct WorkingTrack {
  double birth = 0.0;
  double death = 0.0;
  bool dead = false;
  std::optional<std::size_t> absorbed_into;
  // (grid index, area, perimeter) in descending threshold order
  std::vector<std::size_t> grid;
  std::vector<std::int64_t> area;
  std::vector<std::int64_t> perimeter;
};

}  // namespace

ComponentTracking track_components(const ScalarField& field, std::size_t n_thresholds) {
  ComponentTracking out;
  out.thresholds = threshold_grid(field, n_thresholds);
  const std::size_t w = field.width(), h = field.height(), n = field.size();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return field[a] > field[b] || (field[a] == field[b] && a < b);
  });

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::vector<Root> roots(n);
  std::vector<std::uint8_t> active(n, 0);
  std::vector<WorkingTrack> work;
  std::vector<std::size_t> live;  // pixel ids of current roots
  std::vector<std::size_t> live_slot(n, 0);

  auto record = [&](std::size_t grid_index) {
    for (std::size_t root_pixel : live) {
      const Root& r = roots[root_pixel];
      auto& t = work[r.track];
      t.grid.push_back(grid_index);
      t.area.push_back(r.area);
      t.perimeter.push_back(r.perimeter);
    }
  };

  std::size_t pos = 0;
  for (std::size_t gi = out.thresholds.size(); gi-- > 0;) {
    const double t = out.thresholds[gi];
    for (; pos < n && field[order[pos]] >= t; ++pos) {
      const std::size_t p = order[pos];
      const std::size_t r = p / w, c = p % w;
      std::size_t found[8];
      std::size_t k = 0;
      int shared_edges = 0;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const std::ptrdiff_t rr = static_cast<std::ptrdiff_t>(r) + dr;
          const std::ptrdiff_t cc = static_cast<std::ptrdiff_t>(c) + dc;
          if (rr < 0 || cc < 0 || rr >= static_cast<std::ptrdiff_t>(h) || cc >= static_cast<std::ptrdiff_t>(w)) continue;
          const std::size_t q = static_cast<std::size_t>(rr) * w + static_cast<std::size_t>(cc);
          if (!active[q]) continue;
          if (dr == 0 || dc == 0) ++shared_edges;
          const std::size_t root = find(q);
          if (std::find(found, found + k, root) == found + k) found[k++] = root;
        }
      }
      active[p] = 1;
      const std::int64_t perimeter_delta = 4 - 2 * shared_edges;
      if (k == 0) {
        roots[p] = {pos, 1, perimeter_delta, work.size()};
        work.push_back({field[p], field[p], false, std::nullopt, {}, {}, {}});
        live_slot[p] = live.size();
        live.push_back(p);
        continue;
      }
      std::size_t elder = found[0];
      for (std::size_t i = 1; i < k; ++i) {
        if (roots[found[i]].birth_pos < roots[elder].birth_pos) elder = found[i];
      }
      parent[p] = elder;
      roots[elder].area += 1;
      roots[elder].perimeter += perimeter_delta;
      for (std::size_t i = 0; i < k; ++i) {
        if (found[i] == elder) continue;
        const Root& young = roots[found[i]];
        auto& tr = work[young.track];
        tr.dead = true;
        tr.death = field[p];
        tr.absorbed_into = roots[elder].track;
        roots[elder].area += young.area;
        roots[elder].perimeter += young.perimeter;
        parent[found[i]] = elder;
        const std::size_t slot = live_slot[found[i]];
        live[slot] = live.back();
        live_slot[live[slot]] = slot;
        live.pop_back();
      }
    }
    record(gi);
  }
  if (n > 0) {
    auto& last = work[roots[find(order[0])].track];
    last.death = field[order[n - 1]];
  }

  // Keep the components the persistence diagram keeps: everything with
  // positive persistence plus the essential component.
  std::vector<std::size_t> new_id(work.size(), 0);
  std::vector<bool> keep(work.size(), false);
  std::size_t next = 0;
  for (std::size_t i = 0; i < work.size(); ++i) {
    keep[i] = !work[i].dead || work[i].birth != work[i].death;
    if (keep[i]) new_id[i] = next++;
  }
  for (std::size_t i = 0; i < work.size(); ++i) {
    if (!keep[i]) continue;
    auto& wt = work[i];
    ComponentTrack track;
    track.id = new_id[i];
    track.bar = {wt.birth, wt.death, 0, !wt.dead};
    // The absorber may itself be a dropped zero-length track; follow it up.
    std::optional<std::size_t> into = wt.absorbed_into;
    while (into && !keep[*into]) into = work[*into].absorbed_into;
    if (into) track.absorbed_into = new_id[*into];
    // Recorded in descending order; the alive range is contiguous.
    std::reverse(wt.grid.begin(), wt.grid.end());
    std::reverse(wt.area.begin(), wt.area.end());
    std::reverse(wt.perimeter.begin(), wt.perimeter.end());
    track.first_index = wt.grid.empty() ? 0 : wt.grid.front();
    track.area = std::move(wt.area);
    track.perimeter = std::move(wt.perimeter);
    out.tracks.push_back(std::move(track));
  }
  return out;
}

std::vector<ComponentSummary> component_report(const ComponentTracking& tracking) {
  std::vector<ComponentSummary> rows;
  for (const auto& t : tracking.tracks) {
    ComponentSummary s;
    s.track_id = t.id;
    s.birth = t.bar.birth;
    s.death = t.bar.death;
    s.persistence = t.bar.persistence();
    if (!t.area.empty()) {
      s.max_area = *std::max_element(t.area.begin(), t.area.end());
      s.max_perimeter = *std::max_element(t.perimeter.begin(), t.perimeter.end());
    }
    s.area_persistence = static_cast<double>(s.max_area) * s.persistence;
    rows.push_back(s);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ComponentSummary& a, const ComponentSummary& b) {
    return a.persistence > b.persistence;
  });
  return rows;
}

void write_tracks_csv(std::ostream& out, const ComponentTracking& tracking) {
  out << "track_id,threshold,area,perimeter\n";
  char buf[128];
  for (const auto& t : tracking.tracks) {
    for (std::size_t k = 0; k < t.area.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%lld,%lld\n", t.id, tracking.thresholds[t.first_index + k],
                    static_cast<long long>(t.area[k]), static_cast<long long>(t.perimeter[k]));
      out << buf;
    }
  }
}

void write_track_bars_csv(std::ostream& out, const ComponentTracking& tracking) {
  out << "track_id,birth,death,persistence,max_area,max_perimeter,area_persistence,absorbed_into\n";
  char buf[256];
  for (const auto& s : component_report(tracking)) {
    const auto& t = tracking.tracks[s.track_id];
    const std::string absorbed = t.absorbed_into ? std::to_string(*t.absorbed_into) : "";
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%lld,%lld,%.17g,", s.track_id, s.birth, s.death,
                  s.persistence, static_cast<long long>(s.max_area), static_cast<long long>(s.max_perimeter),
                  s.area_persistence);
    out << buf << absorbed << '\n';
  }
}

}  // namespace geotop
