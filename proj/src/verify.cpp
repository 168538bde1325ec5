#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <utility>

#include "geotop/lkc_features.hpp"
#include "geotop/oracle.hpp"
#include "geotop/pipeline.hpp"
#include "geotop/rng.hpp"

namespace geotop {

namespace {

ScalarField level_field(Rng& rng, std::size_t side, std::size_t levels) {
  std::vector<double> v(side * side);
  for (auto& x : v) x = static_cast<double>(uniform_index(rng, levels));
  return ScalarField(side, side, std::move(v));
}

// Sum of a few random bumps plus noise: produces nested components and holes
// more often than white noise does.
ScalarField bumpy_field(Rng& rng, std::size_t side, bool quantize) {
  std::vector<double> v(side * side, 0.0);
  const std::size_t n_bumps = 2 + uniform_index(rng, 4);
  for (std::size_t b = 0; b < n_bumps; ++b) {
    const double cr = uniform(rng, 0.0, static_cast<double>(side));
    const double cc = uniform(rng, 0.0, static_cast<double>(side));
    const double s = uniform(rng, 1.0, side / 3.0);
    const double a = uniform(rng, -1.0, 1.0);
    for (std::size_t r = 0; r < side; ++r) {
      for (std::size_t c = 0; c < side; ++c) {
        const double d2 = (r - cr) * (r - cr) + (c - cc) * (c - cc);
        v[r * side + c] += a * std::exp(-d2 / (2 * s * s));
      }
    }
  }
  for (auto& x : v) {
    x += 0.2 * standard_normal(rng);
    if (quantize) x = std::round(x * 4.0);
  }
  return ScalarField(side, side, std::move(v));
}

BinaryImage random_mask(Rng& rng, std::size_t side) {
  const double p = uniform(rng, 0.2, 0.8);
  std::vector<std::uint8_t> m(side * side);
  for (auto& x : m) x = uniform01(rng) < p ? 1 : 0;
  return BinaryImage(side, side, std::move(m));
}

SuiteResult brute_force_suite(std::uint64_t seed) {
  SuiteResult s{"persistence vs brute force (8x8, 8 levels)", 0, 0};
  Rng rng(derive_seed(seed, 1));
  for (int i = 0; i < 200; ++i) {
    const ScalarField f = level_field(rng, 8, 8);
    ++s.comparisons;
    if (oracle::sorted_bars(superlevel_diagram(f)) != oracle::sorted_bars(oracle::brute_force_diagram(f))) {
      ++s.failures;
    }
  }
  return s;
}

SuiteResult euler_bridge_suite(std::uint64_t seed) {
  SuiteResult s{"euler curve vs betti0 - betti1 (16x16, 200 thresholds)", 0, 0};
  Rng rng(derive_seed(seed, 2));
  for (int i = 0; i < 100; ++i) {
    const ScalarField f = i % 2 == 0 ? bumpy_field(rng, 16, i % 4 == 0) : level_field(rng, 16, 6);
    const PersistenceDiagram d = superlevel_diagram(f);
    const LkcCurves curves = lkc_curves(f);
    for (std::size_t k = 0; k < curves.thresholds.size(); ++k) {
      const Betti b = betti_at(d, curves.thresholds[k]);
      ++s.comparisons;
      if (static_cast<std::int64_t>(b.beta0) - static_cast<std::int64_t>(b.beta1) != curves.raw_euler[k]) ++s.failures;
    }
  }
  return s;
}

SuiteResult euler_labeling_suite(std::uint64_t seed) {
  SuiteResult s{"euler characteristic vs component labeling (16x16 masks)", 0, 0};
  Rng rng(derive_seed(seed, 3));
  for (int i = 0; i < 500; ++i) {
    const BinaryImage m = random_mask(rng, 16);
    ++s.comparisons;
    if (euler_raw(m) != oracle::components_minus_holes(m)) ++s.failures;
  }
  return s;
}

SuiteResult sweep_suite(std::uint64_t seed) {
  SuiteResult s{"lattice sweep vs per-threshold curves (16x16)", 0, 0};
  Rng rng(derive_seed(seed, 4));
  for (int i = 0; i < 100; ++i) {
    const ScalarField f = bumpy_field(rng, 16, i % 2 == 0);
    const LkcCurves fast = lkc_curves(f);
    const LkcCurves direct = lkc_curves_direct(f);
    ++s.comparisons;
    if (fast.raw_area != direct.raw_area || fast.raw_perimeter != direct.raw_perimeter ||
        fast.raw_euler != direct.raw_euler) {
      ++s.failures;
    }
  }
  return s;
}

// Per threshold: the (area, perimeter) multiset of live tracks must equal the
// one recomputed from scratch on an explicitly labeled excursion set. Equal
// multisets imply additivity; the H0 bars of the tracks must match the diagram.
void local_geometry_suites(std::uint64_t seed, SuiteResult& additivity, SuiteResult& bars) {
  Rng rng(derive_seed(seed, 5));
  for (int i = 0; i < 100; ++i) {
    const ScalarField f = i % 3 == 0 ? level_field(rng, 16, 5) : bumpy_field(rng, 16, i % 2 == 0);
    const ComponentTracking tracking = track_components(f);
    for (std::size_t k = 0; k < tracking.thresholds.size(); ++k) {
      std::vector<std::pair<std::int64_t, std::int64_t>> tracked;
      for (const auto& t : tracking.tracks) {
        if (t.alive_at(k)) tracked.emplace_back(t.area[k - t.first_index], t.perimeter[k - t.first_index]);
      }
      const BinaryImage set = excursion_set(f, tracking.thresholds[k]);
      const oracle::Labeling lab = oracle::label_components(set, oracle::Connectivity::Eight);
      std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(lab.count));
      for (std::size_t p = 0; p < lab.labels.size(); ++p) {
        if (lab.labels[p] >= 0) members[static_cast<std::size_t>(lab.labels[p])].push_back(p);
      }
      std::vector<std::pair<std::int64_t, std::int64_t>> expected;
      for (const auto& m : members) {
        expected.emplace_back(static_cast<std::int64_t>(m.size()),
                              static_cast<std::int64_t>(oracle::boundary_edges(f.width(), f.height(), m)));
      }
      std::sort(tracked.begin(), tracked.end());
      std::sort(expected.begin(), expected.end());
      ++additivity.comparisons;
      if (tracked != expected) ++additivity.failures;
    }
    PersistenceDiagram from_tracks;
    from_tracks.direction = Direction::Superlevel;
    for (const auto& t : tracking.tracks) from_tracks.bars.push_back(t.bar);
    PersistenceDiagram h0 = superlevel_diagram(f);
    std::erase_if(h0.bars, [](const Bar& b) { return b.dim != 0; });
    ++bars.comparisons;
    if (oracle::sorted_bars(from_tracks) != oracle::sorted_bars(h0)) ++bars.failures;
  }
}

}  // namespace

VerifyResult cmd_verify(const RunConfig& config, std::ostream& log) {
  VerifyResult r;
  r.suites.push_back(brute_force_suite(config.seed));
  r.suites.push_back(euler_bridge_suite(config.seed));
  r.suites.push_back(euler_labeling_suite(config.seed));
  r.suites.push_back(sweep_suite(config.seed));
  SuiteResult additivity{"component area/perimeter vs labeled excursion sets", 0, 0};
  SuiteResult bars{"component tracks vs H0 bars", 0, 0};
  local_geometry_suites(config.seed, additivity, bars);
  r.suites.push_back(additivity);
  r.suites.push_back(bars);

  char buf[200];
  for (const auto& s : r.suites) {
    std::snprintf(buf, sizeof buf, "%-58s %6zu checks  %zu mismatches\n", s.name.c_str(), s.comparisons, s.failures);
    log << buf;
  }
  log << (r.ok() ? "verify: OK" : "verify: FAILED") << " (" << r.comparisons() << " checks, " << r.failures()
      << " mismatches)\n";
  return r;
}

}  // namespace geotop
