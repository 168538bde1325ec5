#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geotop/lkc_features.hpp"
#include "geotop/local_geometry.hpp"
#include "geotop/oracle.hpp"
#include "test_support.hpp"

using namespace geotop;

namespace {

ScalarField blob(std::size_t n) {
  std::vector<double> v(n * n);
  const double c = (n - 1) / 2.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) v[r * n + k] = std::exp(-((r - c) * (r - c) + (k - c) * (k - c)) / 50.0);
  return ScalarField(n, n, std::move(v));
}

void expect_additive(const ScalarField& f) {
  const auto tracking = track_components(f);
  const auto curves = lkc_curves(f);
  ASSERT_EQ(tracking.thresholds, curves.thresholds);
  for (std::size_t k = 0; k < curves.thresholds.size(); ++k) {
    std::int64_t area = 0, perimeter = 0;
    for (const auto& t : tracking.tracks) {
      if (!t.alive_at(k)) continue;
      area += t.area[k - t.first_index];
      perimeter += t.perimeter[k - t.first_index];
    }
    ASSERT_EQ(area, curves.raw_area[k]) << "threshold " << k;
    ASSERT_EQ(perimeter, curves.raw_perimeter[k]) << "threshold " << k;
  }
}

}  // namespace

TEST(LocalGeometryTest, SingleBlobHasOneTrackEqualToGlobalCurves) {
  const auto f = blob(31);
  const auto tracking = track_components(f);
  ASSERT_EQ(tracking.tracks.size(), 1u);
  const auto& t = tracking.tracks[0];
  const auto curves = lkc_curves(f);
  EXPECT_EQ(t.first_index, 0u);
  EXPECT_EQ(t.area, curves.raw_area);
  EXPECT_EQ(t.perimeter, curves.raw_perimeter);
  EXPECT_TRUE(t.bar.essential);
  EXPECT_EQ(component_report(tracking).size(), 1u);
}

TEST(LocalGeometryTest, GaussianPlusSquareToy) {
  const auto f = synth_gaussian_square(200, 10, 0).channel(Channel::Gray);
  const auto tracking = track_components(f);
  ASSERT_EQ(tracking.tracks.size(), 2u);
  const auto& gauss = tracking.tracks[0];
  const auto& square = tracking.tracks[1];
  EXPECT_TRUE(gauss.bar.essential);
  EXPECT_EQ(square.absorbed_into, std::optional<std::size_t>(0));
  EXPECT_EQ(gauss.bar.birth, square.bar.birth);
  ASSERT_FALSE(square.area.empty());
  for (std::size_t i = 0; i < square.area.size(); ++i) {
    const double t = tracking.thresholds[square.first_index + i];
    if (t > square.bar.death && t < square.bar.birth) {
      EXPECT_EQ(square.area[i], 100);
      EXPECT_EQ(square.perimeter[i], 40);
    }
  }
  const double pg = gauss.bar.persistence(), ps = square.bar.persistence();
  EXPECT_LT(std::abs(pg - ps) / std::max(pg, ps), 0.10);
  const auto rows = component_report(tracking);
  ASSERT_EQ(rows.size(), 2u);
  const auto& rg = rows[0].track_id == gauss.id ? rows[0] : rows[1];
  const auto& rs = rows[0].track_id == gauss.id ? rows[1] : rows[0];
  EXPECT_GT(rg.max_area, rs.max_area);
  expect_additive(f);
}

TEST(LocalGeometryTest, AdditivityOnHundredFields) {
  Rng rng(derive_seed(3, 5));
  for (int i = 0; i < 100; ++i) {
    const ScalarField f = i % 3 == 0 ? fixtures::random_levels(rng, 16, 16, 5) : fixtures::random_bumps(rng, 16);
    expect_additive(f);
  }
}

TEST(LocalGeometryTest, TracksMatchH0Bars) {
  Rng rng(31);
  for (int i = 0; i < 50; ++i) {
    const ScalarField f = i % 2 ? fixtures::random_levels(rng, 12, 12, 4) : fixtures::random_bumps(rng, 14);
    const auto tracking = track_components(f);
    PersistenceDiagram a;
    for (const auto& t : tracking.tracks) a.bars.push_back(t.bar);
    PersistenceDiagram h0 = superlevel_diagram(f);
    std::erase_if(h0.bars, [](const Bar& b) { return b.dim != 0; });
    ASSERT_EQ(oracle::sorted_bars(a), oracle::sorted_bars(h0));
  }
}

TEST(LocalGeometryTest, RunningPerimeterMatchesFromScratchCount) {
  Rng rng(32);
  for (int i = 0; i < 30; ++i) {
    const ScalarField f = fixtures::random_bumps(rng, 16);
    const auto tracking = track_components(f, 60);
    for (std::size_t k = 0; k < tracking.thresholds.size(); ++k) {
      std::vector<std::pair<std::int64_t, std::int64_t>> tracked, expected;
      for (const auto& t : tracking.tracks)
        if (t.alive_at(k)) tracked.emplace_back(t.area[k - t.first_index], t.perimeter[k - t.first_index]);
      const auto lab = oracle::label_components(excursion_set(f, tracking.thresholds[k]), oracle::Connectivity::Eight);
      std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(lab.count));
      for (std::size_t p = 0; p < lab.labels.size(); ++p)
        if (lab.labels[p] >= 0) members[static_cast<std::size_t>(lab.labels[p])].push_back(p);
      for (const auto& m : members)
        expected.emplace_back(static_cast<std::int64_t>(m.size()), static_cast<std::int64_t>(oracle::boundary_edges(16, 16, m)));
      std::sort(tracked.begin(), tracked.end());
      std::sort(expected.begin(), expected.end());
      ASSERT_EQ(tracked, expected);
    }
  }
}

TEST(LocalGeometryTest, AbsorbedIntoPointsAtAnElderTrack) {
  Rng rng(33);
  for (int i = 0; i < 20; ++i) {
    const auto tracking = track_components(fixtures::random_levels(rng, 12, 12, 3));
    for (const auto& t : tracking.tracks) {
      if (t.bar.essential) {
        EXPECT_FALSE(t.absorbed_into.has_value());
        continue;
      }
      ASSERT_TRUE(t.absorbed_into.has_value());
      ASSERT_LT(*t.absorbed_into, tracking.tracks.size());
      EXPECT_GE(tracking.tracks[*t.absorbed_into].bar.birth, t.bar.birth);
    }
  }
}

TEST(LocalGeometryTest, CsvWriters) {
  const auto tracking = track_components(synth_gaussian_square(40, 5, 0).channel(Channel::Gray), 20);
  std::ostringstream a, b;
  write_tracks_csv(a, tracking);
  write_track_bars_csv(b, tracking);
  EXPECT_EQ(a.str().rfind("track_id,threshold,area,perimeter\n", 0), 0u);
  EXPECT_EQ(b.str().rfind("track_id,birth,death,persistence,max_area,max_perimeter,area_persistence,absorbed_into\n", 0), 0u);
  std::size_t alive = 0;
  for (const auto& t : tracking.tracks) alive += t.area.size();
  const std::string rows = a.str();
  EXPECT_EQ(static_cast<std::size_t>(std::count(rows.begin(), rows.end(), '\n')), alive + 1);
}
