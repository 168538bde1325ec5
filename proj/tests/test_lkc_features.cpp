#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numeric>

#include "geotop/lkc_features.hpp"
#include "geotop/oracle.hpp"
#include "geotop/persistence.hpp"
#include "test_support.hpp"

using namespace geotop;

namespace {

BinaryImage square_mask(std::size_t n, std::size_t r0, std::size_t c0, std::size_t side) {
  std::vector<std::uint8_t> m(n * n, 0);
  for (std::size_t r = r0; r < r0 + side; ++r)
    for (std::size_t c = c0; c < c0 + side; ++c) m[r * n + c] = 1;
  return BinaryImage(n, n, std::move(m));
}

BinaryImage random_mask(Rng& rng, std::size_t side) {
  const double p = uniform(rng, 0.2, 0.8);
  std::vector<std::uint8_t> m(side * side);
  for (auto& x : m) x = uniform01(rng) < p;
  return BinaryImage(side, side, std::move(m));
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(LkcRawTest, Area) {
  EXPECT_EQ(area_raw(BinaryImage(4, 4, std::vector<std::uint8_t>(16, 0))), 0u);
  EXPECT_EQ(area_raw(BinaryImage(224, 224, std::vector<std::uint8_t>(224 * 224, 1))), 50176u);
  const auto rings = excursion_set(fixtures::rings_and_disk(), 1.0);
  std::size_t hand = 0;
  const auto f = fixtures::rings_and_disk();
  for (std::size_t r = 0; r < 30; ++r)
    for (std::size_t c = 0; c < 30; ++c) hand += f(r, c) == 1.0;
  EXPECT_EQ(area_raw(rings), hand);
}

TEST(LkcRawTest, Perimeter) {
  EXPECT_EQ(perimeter_raw(square_mask(5, 2, 2, 1)), 4u);
  EXPECT_EQ(perimeter_raw(square_mask(20, 3, 5, 10)), 40u);
  EXPECT_EQ(perimeter_raw(BinaryImage(2, 2, {1, 0, 0, 1})), 8u);
  EXPECT_EQ(perimeter_raw(BinaryImage(0, 0, {})), 0u);
}

TEST(LkcRawTest, PerimeterMatchesBoundaryEdgeOracle) {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    const auto m = random_mask(rng, 12);
    std::vector<std::size_t> px;
    for (std::size_t k = 0; k < m.size(); ++k)
      if (m.mask[k]) px.push_back(k);
    EXPECT_EQ(perimeter_raw(m), oracle::boundary_edges(12, 12, px));
  }
}

TEST(LkcRawTest, Euler) {
  EXPECT_EQ(euler_raw(square_mask(8, 2, 2, 4)), 1);
  EXPECT_EQ(euler_raw(excursion_set(fixtures::rings_and_disk(), 1.0)), 1);
  EXPECT_EQ(euler_raw(excursion_set(fixtures::ring5x5(), 1.0)), 0);
  EXPECT_EQ(euler_raw(BinaryImage(2, 2, {1, 0, 0, 1})), 1);
}

TEST(LkcRawTest, EulerMatchesLabelingOnFiveHundredMasks) {
  Rng rng(derive_seed(7, 3));
  for (int i = 0; i < 500; ++i) {
    const auto m = random_mask(rng, 16);
    ASSERT_EQ(euler_raw(m), oracle::components_minus_holes(m)) << "mask " << i;
  }
}

TEST(LkcRawTest, Bounds) {
  Rng rng(22);
  for (int i = 0; i < 100; ++i) {
    const auto m = random_mask(rng, 10);
    EXPECT_LE(perimeter_raw(m), 4 * area_raw(m));
    EXPECT_LE(static_cast<std::size_t>(std::labs(euler_raw(m))), area_raw(m));
  }
}

TEST(ThresholdGridTest, EndpointsAndSpacing) {
  Rng rng(1);
  const auto f = fixtures::random_uniform(rng, 7, 7);
  const auto t = threshold_grid(f);
  ASSERT_EQ(t.size(), 200u);
  EXPECT_EQ(t.front(), f.min());
  EXPECT_EQ(t.back(), f.max());
  for (std::size_t k = 1; k < t.size(); ++k) EXPECT_GT(t[k], t[k - 1]);
  const auto c = threshold_grid(ScalarField::filled(3, 3, 2.0), 5);
  EXPECT_EQ(c, std::vector<double>(5, 2.0));
}

TEST(LkcCurvesTest, FirstThresholdIsFullFrame) {
  Rng rng(2);
  const std::size_t m = 12;
  const auto curves = lkc_curves(fixtures::random_uniform(rng, m, m));
  EXPECT_DOUBLE_EQ(curves.area[0], 1.0);
  EXPECT_DOUBLE_EQ(curves.perimeter[0], 4.0 * m / (m * m));
  EXPECT_DOUBLE_EQ(curves.euler[0], 1.0 / (m * m));
  for (std::size_t k = 1; k < curves.area.size(); ++k) EXPECT_LE(curves.area[k], curves.area[k - 1]);
}

TEST(LkcCurvesTest, EulerBridgeOnHundredFields) {
  Rng rng(derive_seed(11, 2));
  for (int i = 0; i < 100; ++i) {
    const ScalarField f = i % 2 ? fixtures::random_levels(rng, 16, 16, 6) : fixtures::random_bumps(rng, 16);
    const auto d = superlevel_diagram(f);
    const auto curves = lkc_curves(f);
    for (std::size_t k = 0; k < curves.thresholds.size(); ++k) {
      const Betti b = betti_at(d, curves.thresholds[k]);
      ASSERT_EQ(curves.raw_euler[k], b.beta0 - b.beta1) << "field " << i << " threshold " << k;
      EXPECT_DOUBLE_EQ(curves.euler[k] * 256.0, static_cast<double>(b.beta0 - b.beta1));
    }
  }
}

TEST(LkcCurvesTest, SweepMatchesDirectRoute) {
  Rng rng(3);
  for (int i = 0; i < 30; ++i) {
    const std::size_t w = 3 + uniform_index(rng, 20), h = 3 + uniform_index(rng, 20);
    const ScalarField f = i % 2 ? fixtures::random_levels(rng, w, h, 5) : fixtures::random_uniform(rng, w, h);
    const auto a = lkc_curves(f), b = lkc_curves_direct(f);
    EXPECT_EQ(a.raw_area, b.raw_area);
    EXPECT_EQ(a.raw_perimeter, b.raw_perimeter);
    EXPECT_EQ(a.raw_euler, b.raw_euler);
    EXPECT_EQ(a.area, b.area);
  }
}

TEST(LkcCurvesTest, PerimeterCorrectionScalesOnlyPerimeter) {
  Rng rng(4);
  const auto f = fixtures::random_uniform(rng, 9, 9);
  const auto a = lkc_curves(f), b = lkc_curves(f, LkcOptions{200, 0.5});
  for (std::size_t k = 0; k < a.perimeter.size(); ++k) {
    EXPECT_DOUBLE_EQ(b.perimeter[k], 0.5 * a.perimeter[k]);
    EXPECT_EQ(b.area[k], a.area[k]);
  }
}

TEST(DerivativeTest, Basics) {
  EXPECT_EQ(derivative(std::vector<double>(5, 3.0)), std::vector<double>(4, 0.0));
  std::vector<double> lin(10);
  for (std::size_t i = 0; i < lin.size(); ++i) lin[i] = 0.25 * static_cast<double>(i);
  for (double d : derivative(lin)) EXPECT_DOUBLE_EQ(d, 0.25);
  Rng rng(5);
  std::vector<double> f(200);
  for (auto& x : f) x = uniform01(rng);
  const auto d = derivative(f);
  EXPECT_NEAR(std::accumulate(d.begin(), d.end(), 0.0), f.back() - f.front(), 1e-12);
}

TEST(SummaryTest, Values) {
  std::vector<double> t(200);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i) / 199.0;
  const std::vector<double> zero(200, 0.0);
  for (double v : summarize(zero, derivative(zero), t)) EXPECT_EQ(v, 0.0);

  std::vector<double> f(200, 0.0);
  f[0] = 3.0;
  f[1] = 4.0;
  const auto s = summarize(f, derivative(f), t);
  EXPECT_NEAR(s[0], 5.0, 1e-12);
  EXPECT_NEAR(s[4], 7.0, 1e-12);
  EXPECT_EQ(s[7], 2.0);
  EXPECT_NEAR(s[5], -(3.0 / 7) * std::log(3.0 / 7) - (4.0 / 7) * std::log(4.0 / 7), 1e-12);
  EXPECT_NEAR(s[9], -3.0, 1e-12);

  const std::vector<double> one(200, 1.0);
  EXPECT_NEAR(summarize(one, derivative(one), t)[2], 1.0, 1e-12);
  EXPECT_THROW(summarize(one, derivative(one), std::vector<double>(10)), std::invalid_argument);
}

TEST(LkcFeaturesTest, SchemaMatchesGolden) {
  const auto schema = lkc_schema();
  EXPECT_EQ(std::vector<std::string>(schema.begin(), schema.end()),
            read_lines(std::string(GEOTOP_GOLDEN_DIR) + "/lkc_schema.txt"));
  const auto all = geotop_schema();
  EXPECT_EQ(std::vector<std::string>(all.begin(), all.end()),
            read_lines(std::string(GEOTOP_GOLDEN_DIR) + "/geotop_schema.txt"));
}

TEST(LkcFeaturesTest, LengthsAndConcatenation) {
  for (const auto& li : synth_dataset(4, 2)) {
    const auto img = preprocess(li.image);
    const auto lkc = lkc_feature_vector(img);
    const auto tda = tda_feature_vector(img);
    const auto all = geotop_feature_vector(img);
    ASSERT_EQ(lkc.size(), 120u);
    ASSERT_EQ(all.size(), 184u);
    EXPECT_TRUE(std::equal(tda.values.begin(), tda.values.end(), all.values.begin()));
    EXPECT_TRUE(std::equal(lkc.values.begin(), lkc.values.end(), all.values.begin() + 64));
    EXPECT_EQ(lkc_feature_vector(img).values, lkc.values);
  }
}

TEST(LkcFeaturesTest, ReplicatedGrayGivesEqualBlocks) {
  Rng rng(8);
  const auto fv = lkc_feature_vector(MultiChannelImage::from_gray(fixtures::random_bumps(rng, 20), "g"));
  for (std::size_t ch = 1; ch < 4; ++ch)
    for (std::size_t k = 0; k < 30; ++k) EXPECT_EQ(fv.values[ch * 30 + k], fv.values[k]);
}
