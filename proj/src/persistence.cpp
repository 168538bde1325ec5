#include "geotop/persistence.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "json.hpp"

namespace geotop {

std::vector<Bar> PersistenceDiagram::of_dim(int dim) const {
  std::vector<Bar> out;
  for (const auto& b : bars) {
    if (b.dim == dim) out.push_back(b);
  }
  return out;
}

std::size_t PersistenceDiagram::count(int dim) const {
  return static_cast<std::size_t>(
      std::count_if(bars.begin(), bars.end(), [dim](const Bar& b) { return b.dim == dim; }));
}

Filtration Filtration::build(const ScalarField& field, Direction direction) {
  std::vector<double> normalized(field.values().begin(), field.values().end());
  if (direction == Direction::Superlevel) {
    for (auto& v : normalized) v = -v;
  }
  return Filtration(field, direction, std::move(normalized));
}

int Filtration::cell_dim(std::size_t cell_row, std::size_t cell_col) const {
  return static_cast<int>(cell_row % 2) + static_cast<int>(cell_col % 2);
}

double Filtration::cell_value(std::size_t cell_row, std::size_t cell_col) const {
  if (cell_row >= cell_rows() || cell_col >= cell_cols()) {
    throw std::out_of_range("Filtration::cell_value: cell outside the complex");
  }
  const std::size_t h = field_.height(), w = field_.width();
  // Incident pixel rows/cols: an odd coordinate names one pixel, an even
  // coordinate the (up to) two pixels on either side of a grid line.
  auto span_of = [](std::size_t cell, std::size_t limit, std::size_t& lo, std::size_t& hi) {
    if (cell % 2 == 1) {
      lo = hi = (cell - 1) / 2;
    } else {
      lo = cell == 0 ? 0 : cell / 2 - 1;
      hi = std::min(cell / 2, limit - 1);
    }
  };
  std::size_t r0, r1, c0, c1;
  span_of(cell_row, h, r0, r1);
  span_of(cell_col, w, c0, c1);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = r0; r <= r1; ++r) {
    for (std::size_t c = c0; c <= c1; ++c) best = std::min(best, normalized_[r * w + c]);
  }
  return direction_ == Direction::Superlevel ? -best : best;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void attach(std::size_t child_root, std::size_t parent_root) { parent_[child_root] = parent_root; }

 private:
  std::vector<std::size_t> parent_;
};

// A root is "elder" when its birth came first in the processing order.
inline bool elder_first(std::size_t birth_pos_a, std::size_t birth_pos_b) {
#ifdef GEOTOP_INVERT_ELDER_RULE
  return birth_pos_a > birth_pos_b;
#else
  return birth_pos_a < birth_pos_b;
#endif
}

}  // namespace

PersistenceDiagram compute_persistence(const Filtration& filtration) {
  const auto& g = filtration.normalized();
  const std::size_t w = filtration.field().width();
  const std::size_t h = filtration.field().height();
  const std::size_t n = g.size();
  PersistenceDiagram diagram;
  diagram.direction = filtration.direction();
  if (n == 0) return diagram;

  // Ascending (value, index): for superlevel this is brightest-first with
  // ties resolved by the smaller row-major index.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return g[a] < g[b] || (g[a] == g[b] && a < b);
  });

  const double sign = filtration.direction() == Direction::Superlevel ? -1.0 : 1.0;
  auto emit = [&](double birth, double death, int dim, bool essential) {
    if (birth == death && !essential) return;
    diagram.bars.push_back({sign * birth, sign * death, dim, essential});
  };

  // Dimension 0: 8-connected sweep in ascending order.
  {
    DisjointSets sets(n);
    std::vector<std::size_t> birth_pos(n, 0);
    std::vector<std::uint8_t> active(n, 0);
    std::size_t roots[8];
    for (std::size_t pos = 0; pos < n; ++pos) {
      const std::size_t p = order[pos];
      const std::size_t r = p / w, c = p % w;
      std::size_t k = 0;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const std::ptrdiff_t rr = static_cast<std::ptrdiff_t>(r) + dr;
          const std::ptrdiff_t cc = static_cast<std::ptrdiff_t>(c) + dc;
          if (rr < 0 || cc < 0 || rr >= static_cast<std::ptrdiff_t>(h) || cc >= static_cast<std::ptrdiff_t>(w)) continue;
          const std::size_t q = static_cast<std::size_t>(rr) * w + static_cast<std::size_t>(cc);
          if (!active[q]) continue;
          const std::size_t root = sets.find(q);
          if (std::find(roots, roots + k, root) == roots + k) roots[k++] = root;
        }
      }
      active[p] = 1;
      if (k == 0) {
        birth_pos[p] = pos;
        continue;
      }
      std::size_t elder = roots[0];
      for (std::size_t i = 1; i < k; ++i) {
        if (elder_first(birth_pos[roots[i]], birth_pos[elder])) elder = roots[i];
      }
      sets.attach(p, elder);
      for (std::size_t i = 0; i < k; ++i) {
        if (roots[i] == elder) continue;
        emit(g[order[birth_pos[roots[i]]]], g[p], 0, false);
        sets.attach(roots[i], elder);
      }
    }
    const std::size_t last = sets.find(order[0]);
    emit(g[order[birth_pos[last]]], g[order[n - 1]], 0, true);
  }

  // Dimension 1: holes of the sublevel set are bounded 4-connected
  // components of its complement. Sweep the complement in descending order;
  // node n is the outside of the image and is older than every pixel.
  {
    DisjointSets sets(n + 1);
    std::vector<std::size_t> birth_pos(n + 1, 0);
    std::vector<std::uint8_t> active(n, 0);
    const std::size_t outside = n;
    auto older = [&](std::size_t a, std::size_t b) {
      if (a == outside) return true;
      if (b == outside) return false;
      return elder_first(birth_pos[a], birth_pos[b]);
    };
    std::size_t roots[5];
    for (std::size_t step = 0; step < n; ++step) {
      const std::size_t pos = n - 1 - step;
      const std::size_t p = order[pos];
      const std::size_t r = p / w, c = p % w;
      std::size_t k = 0;
      auto consider = [&](std::size_t q) {
        const std::size_t root = sets.find(q);
        if (std::find(roots, roots + k, root) == roots + k) roots[k++] = root;
      };
      if (r == 0 || c == 0 || r + 1 == h || c + 1 == w) consider(outside);
      if (r > 0 && active[p - w]) consider(p - w);
      if (r + 1 < h && active[p + w]) consider(p + w);
      if (c > 0 && active[p - 1]) consider(p - 1);
      if (c + 1 < w && active[p + 1]) consider(p + 1);
      active[p] = 1;
      if (k == 0) {
        birth_pos[p] = step;
        continue;
      }
      std::size_t elder = roots[0];
      for (std::size_t i = 1; i < k; ++i) {
        if (older(roots[i], elder)) elder = roots[i];
      }
      sets.attach(p, elder);
      for (std::size_t i = 0; i < k; ++i) {
        if (roots[i] == elder) continue;
        // The hole is born (in the primal sweep) when p closes it and dies
        // at the highest value inside it.
        emit(g[p], g[order[n - 1 - birth_pos[roots[i]]]], 1, false);
        sets.attach(roots[i], elder);
      }
    }
  }
  return diagram;
}

Betti betti_at(const PersistenceDiagram& diagram, double t) {
  Betti b;
  const bool super = diagram.direction == Direction::Superlevel;
  for (const auto& bar : diagram.bars) {
    const bool born = super ? bar.birth >= t : bar.birth <= t;
    const bool dead = super ? !(t > bar.death) : !(t < bar.death);
    if (!born || (dead && !bar.essential)) continue;
    (bar.dim == 0 ? b.beta0 : b.beta1) += 1;
  }
  return b;
}

BettiProfile betti_profile(const PersistenceDiagram& diagram, const std::vector<double>& thresholds) {
  BettiProfile profile;
  profile.thresholds = thresholds;
  std::sort(profile.thresholds.begin(), profile.thresholds.end());
  for (double t : profile.thresholds) {
    const Betti b = betti_at(diagram, t);
    profile.beta0.push_back(b.beta0);
    profile.beta1.push_back(b.beta1);
  }
  return profile;
}

std::string diagram_to_json(const PersistenceDiagram& diagram) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& b : diagram.bars) {
    nlohmann::json o = {{"birth", b.birth}, {"death", b.death}, {"dim", b.dim}};
    if (b.essential) o["essential"] = true;
    arr.push_back(std::move(o));
  }
  return arr.dump();
}

PersistenceDiagram diagram_from_json(const std::string& text, Direction direction) {
  const auto arr = nlohmann::json::parse(text);
  if (!arr.is_array()) throw std::invalid_argument("diagram JSON must be an array");
  PersistenceDiagram d;
  d.direction = direction;
  for (const auto& o : arr) {
    Bar b;
    b.birth = o.at("birth").get<double>();
    b.death = o.at("death").get<double>();
    b.dim = o.at("dim").get<int>();
    b.essential = o.value("essential", false);
    if (b.dim != 0 && b.dim != 1) throw std::invalid_argument("diagram JSON: dim must be 0 or 1");
    d.bars.push_back(b);
  }
  return d;
}

void write_barcode_csv(std::ostream& out, const PersistenceDiagram& diagram) {
  out << "bar_id,dim,birth,death\n";
  char buf[96];
  for (std::size_t i = 0; i < diagram.bars.size(); ++i) {
    const auto& b = diagram.bars[i];
    std::snprintf(buf, sizeof buf, "%zu,%d,%.17g,%.17g\n", i, b.dim, b.birth, b.death);
    out << buf;
  }
}

}  // namespace geotop
