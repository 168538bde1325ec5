#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "geotop/local_geometry.hpp"
#include "geotop/oracle.hpp"
#include "geotop/persistence.hpp"
#include "test_support.hpp"

using namespace geotop;
using geotop::fixtures::rings_and_disk;

TEST(FiltrationTest, SinglePixelAndFaces) {
  const auto f = Filtration::build(ScalarField(1, 1, {5.0}), Direction::Superlevel);
  ASSERT_EQ(f.cell_rows(), 3u);
  ASSERT_EQ(f.cell_cols(), 3u);
  EXPECT_EQ(f.cell_dim(1, 1), 2);
  EXPECT_EQ(f.cell_dim(0, 1), 1);
  EXPECT_EQ(f.cell_dim(0, 0), 0);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(f.cell_value(r, c), 5.0);
}

TEST(FiltrationTest, DiagonalPixelsShareAVertex) {
  // Actives at (0,0) and (1,1); the shared corner enters with the first.
  const ScalarField field(2, 2, {1, 0, 0, 1});
  const auto f = Filtration::build(field, Direction::Superlevel);
  EXPECT_EQ(f.cell_value(2, 2), 1.0);
  EXPECT_EQ(betti_at(superlevel_diagram(field), 1.0), (Betti{1, 0}));
}

TEST(FiltrationTest, SublevelOfNegationMirrorsSuperlevel) {
  Rng rng(3);
  const ScalarField f = fixtures::random_uniform(rng, 6, 5);
  std::vector<double> neg(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) neg[i] = -f[i];
  const auto up = Filtration::build(f, Direction::Superlevel);
  const auto down = Filtration::build(ScalarField(6, 5, neg), Direction::Sublevel);
  for (std::size_t r = 0; r < up.cell_rows(); ++r)
    for (std::size_t c = 0; c < up.cell_cols(); ++c) EXPECT_EQ(down.cell_value(r, c), -up.cell_value(r, c));

  auto a = superlevel_diagram(f);
  auto b = compute_persistence(down);
  for (auto& bar : b.bars) bar = {-bar.birth, -bar.death, bar.dim, bar.essential};
  b.direction = Direction::Superlevel;
  EXPECT_EQ(oracle::sorted_bars(a), oracle::sorted_bars(b));
}

TEST(PersistenceTest, ConstantFieldHasOneEssentialBar) {
  const auto d = superlevel_diagram(ScalarField::filled(7, 4, 2.5));
  ASSERT_EQ(d.bars.size(), 1u);
  EXPECT_EQ(d.bars[0], (Bar{2.5, 2.5, 0, true}));
}

TEST(PersistenceTest, SingleBrightPixel) {
  std::vector<double> v(25, 0.0);
  v[12] = 9.0;
  const auto d = superlevel_diagram(ScalarField(5, 5, v));
  ASSERT_EQ(d.bars.size(), 1u);
  EXPECT_EQ(d.bars[0], (Bar{9.0, 0.0, 0, true}));
}

TEST(PersistenceTest, RingHasOneHole) {
  const auto d = superlevel_diagram(fixtures::ring5x5());
  const auto h1 = d.of_dim(1);
  ASSERT_EQ(h1.size(), 1u);
  EXPECT_EQ(h1[0].birth, 1.0);
  EXPECT_EQ(h1[0].death, 0.0);
  EXPECT_EQ(d.count(0), 1u);
  EXPECT_EQ(oracle::sorted_bars(d), oracle::sorted_bars(oracle::brute_force_diagram(fixtures::ring5x5())));
}

TEST(PersistenceTest, RingsAndDiskFixture) {
  const auto d = superlevel_diagram(rings_and_disk());
  EXPECT_EQ(betti_at(d, 1.0), (Betti{3, 2}));
  EXPECT_EQ(betti_at(d, 0.0), (Betti{1, 0}));
  EXPECT_EQ(betti_at(d, 1.5), (Betti{0, 0}));
}

TEST(PersistenceTest, BettiAtExtremes) {
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const ScalarField f = fixtures::random_uniform(rng, 9, 9);
    const auto d = superlevel_diagram(f);
    EXPECT_EQ(betti_at(d, f.max() + 1.0), (Betti{0, 0}));
    EXPECT_EQ(betti_at(d, f.min()), (Betti{1, 0}));
    EXPECT_EQ(betti_at(d, f.min() - 1.0), (Betti{1, 0}));
  }
}

TEST(PersistenceTest, MatchesBruteForceOn200Fields) {
  Rng rng(derive_seed(42, 1));
  for (int i = 0; i < 200; ++i) {
    const ScalarField f = fixtures::random_levels(rng, 8, 8, 8);
    ASSERT_EQ(oracle::sorted_bars(superlevel_diagram(f)), oracle::sorted_bars(oracle::brute_force_diagram(f)))
        << "field " << i;
  }
}

TEST(PersistenceTest, MatchesBruteForceOnRectanglesAndContinuousValues) {
  Rng rng(99);
  for (int i = 0; i < 60; ++i) {
    const std::size_t w = 1 + uniform_index(rng, 12), h = 1 + uniform_index(rng, 12);
    const ScalarField f = i % 2 ? fixtures::random_levels(rng, w, h, 4) : fixtures::random_uniform(rng, w, h);
    if (w * h > 64 && i % 2 == 0) continue;  // brute force caps distinct values
    ASSERT_EQ(oracle::sorted_bars(superlevel_diagram(f)), oracle::sorted_bars(oracle::brute_force_diagram(f)));
  }
}

TEST(PersistenceTest, BruteForceGuard) {
  EXPECT_THROW(oracle::brute_force_diagram(ScalarField::filled(33, 2, 0.0)), std::invalid_argument);
  Rng rng(1);
  EXPECT_THROW(oracle::brute_force_diagram(fixtures::random_uniform(rng, 10, 10)), std::invalid_argument);
}

TEST(PersistenceTest, BarsAreOrientedAndNonTrivial) {
  Rng rng(8);
  for (int i = 0; i < 30; ++i) {
    const auto d = superlevel_diagram(fixtures::random_bumps(rng, 16));
    std::size_t essential = 0;
    for (const auto& b : d.bars) {
      EXPECT_GT(b.birth, b.death);
      essential += b.essential;
      if (b.essential) EXPECT_EQ(b.dim, 0);
    }
    EXPECT_EQ(essential, 1u);
  }
}

TEST(PersistenceTest, StableUnderSmallNoise) {
  Rng rng(17);
  for (double eps : {0.01, 0.1}) {
    for (int i = 0; i < 40; ++i) {
      const ScalarField f = fixtures::random_uniform(rng, 8, 8);
      std::vector<double> g(f.size());
      for (std::size_t k = 0; k < g.size(); ++k) g[k] = f[k] + uniform(rng, -eps, eps);
      const auto a = superlevel_diagram(f);
      const auto b = superlevel_diagram(ScalarField(8, 8, g));
      for (int dim : {0, 1}) EXPECT_LE(oracle::bottleneck_distance(a, b, dim), eps + 1e-12);
    }
  }
}

TEST(BottleneckOracleTest, SmallCases) {
  PersistenceDiagram a, b;
  a.bars = {{1.0, 0.0, 0, false}};
  b.bars = {{1.2, 0.1, 0, false}};
  EXPECT_NEAR(oracle::bottleneck_distance(a, b, 0), 0.2, 1e-12);
  b.bars.clear();
  EXPECT_NEAR(oracle::bottleneck_distance(a, b, 0), 0.5, 1e-12);
  EXPECT_EQ(oracle::bottleneck_distance(b, b, 1), 0.0);
}

TEST(PersistenceTest, BirthOrderFollowsSweep) {
  Rng rng(23);
  for (int i = 0; i < 20; ++i) {
    const auto tracking = track_components(fixtures::random_bumps(rng, 16));
    for (std::size_t k = 1; k < tracking.tracks.size(); ++k) {
      EXPECT_GE(tracking.tracks[k - 1].bar.birth, tracking.tracks[k].bar.birth);
    }
  }
}

TEST(PersistenceTest, JsonRoundTripAndCsv) {
  Rng rng(4);
  const auto d = superlevel_diagram(fixtures::random_levels(rng, 10, 10, 6));
  const auto back = diagram_from_json(diagram_to_json(d), Direction::Superlevel);
  EXPECT_EQ(oracle::sorted_bars(back), oracle::sorted_bars(d));
  std::ostringstream csv;
  write_barcode_csv(csv, d);
  const std::string text = csv.str();
  EXPECT_EQ(text.rfind("bar_id,dim,birth,death\n", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), d.bars.size() + 1);
}

TEST(PersistenceTest, BettiProfileMatchesPointQueries) {
  const auto d = superlevel_diagram(rings_and_disk());
  const std::vector<double> ts = {-1.0, 0.0, 0.5, 1.0, 2.0};
  const auto prof = betti_profile(d, ts);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    EXPECT_EQ(prof.beta0[k], betti_at(d, ts[k]).beta0);
    EXPECT_EQ(prof.beta1[k], betti_at(d, ts[k]).beta1);
  }
}
