#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "geotop/tda_features.hpp"
#include "test_support.hpp"

using namespace geotop;

namespace {

double amp(std::vector<Interval> bars, AmplitudeMetric m, AmplitudeParams p = {}) {
  return amplitude(bars, AmplitudeConfig{m, p});
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Dense midpoint-rule evaluation straight from the functional definitions.
namespace dense {

constexpr int kCells = 2000;

double g(double u, double s) { return std::exp(-u * u / (2 * s * s)) / (s * std::sqrt(2 * std::numbers::pi)); }

double tent(const Interval& b, double t) {
  if (t <= b.birth || t >= b.death) return 0.0;
  return std::min(t - b.birth, b.death - t);
}

std::pair<double, double> span(const std::vector<Interval>& bars) {
  double lo = bars[0].birth, hi = bars[0].death;
  for (const auto& b : bars) lo = std::min(lo, b.birth), hi = std::max(hi, b.death);
  return {lo, hi};
}

double landscape(const std::vector<Interval>& bars) {
  const auto [lo, hi] = span(bars);
  const double h = (hi - lo) / kCells;
  double s = 0.0;
  for (int j = 0; j < kCells; ++j) {
    const double t = lo + (j + 0.5) * h;
    double top = 0.0;
    for (const auto& b : bars) top = std::max(top, tent(b, t));
    s += top * top * h;
  }
  return std::sqrt(s);
}

double silhouette(const std::vector<Interval>& bars) {
  const auto [lo, hi] = span(bars);
  const double h = (hi - lo) / kCells;
  double wsum = 0.0;
  for (const auto& b : bars) wsum += b.death - b.birth;
  double s = 0.0;
  for (int j = 0; j < kCells; ++j) {
    const double t = lo + (j + 0.5) * h;
    double phi = 0.0;
    for (const auto& b : bars) phi += (b.death - b.birth) * tent(b, t);
    phi /= wsum;
    s += phi * phi * h;
  }
  return std::sqrt(s);
}

double heat(const std::vector<Interval>& bars, double sigma_frac) {
  const auto [lo, hi] = span(bars);
  const double h = (hi - lo) / kCells, sigma = sigma_frac * (hi - lo);
  std::vector<std::vector<double>> gb(bars.size(), std::vector<double>(kCells)), gd = gb;
  for (std::size_t i = 0; i < bars.size(); ++i) {
    for (int j = 0; j < kCells; ++j) {
      const double x = lo + (j + 0.5) * h;
      gb[i][j] = g(x - bars[i].birth, sigma);
      gd[i][j] = g(x - bars[i].death, sigma);
    }
  }
  double s = 0.0;
  for (int j = 0; j < kCells; ++j) {
    for (int k = 0; k < kCells; ++k) {
      double v = 0.0;
      for (std::size_t i = 0; i < bars.size(); ++i) v += gb[i][j] * gd[i][k] - gd[i][j] * gb[i][k];
      s += v * v * h * h;
    }
  }
  return std::sqrt(s);
}

double persistence_image(const std::vector<Interval>& bars, double sigma_frac) {
  double bmin = bars[0].birth, bmax = bars[0].birth, lmax = 0.0;
  for (const auto& b : bars) {
    bmin = std::min(bmin, b.birth), bmax = std::max(bmax, b.birth);
    lmax = std::max(lmax, b.death - b.birth);
  }
  const double side = std::max(bmax - bmin, lmax), x0 = 0.5 * (bmin + bmax) - side / 2;
  const double h = side / kCells, sigma = sigma_frac * side;
  std::vector<std::vector<double>> gx(bars.size(), std::vector<double>(kCells)), gy = gx;
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double l = bars[i].death - bars[i].birth;
    for (int j = 0; j < kCells; ++j) {
      gx[i][j] = l * g(x0 + (j + 0.5) * h - bars[i].birth, sigma);
      gy[i][j] = g((j + 0.5) * h - l, sigma);
    }
  }
  double s = 0.0;
  for (int j = 0; j < kCells; ++j) {
    for (int k = 0; k < kCells; ++k) {
      double v = 0.0;
      for (std::size_t i = 0; i < bars.size(); ++i) v += gx[i][j] * gy[i][k];
      s += v * v * h * h;
    }
  }
  return std::sqrt(s);
}

}  // namespace dense

std::vector<Interval> random_bars(Rng& rng, std::size_t n) {
  std::vector<Interval> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double b = uniform(rng, -1.0, 1.0);
    out.push_back({b, b + uniform(rng, 0.05, 1.0)});
  }
  return out;
}

}  // namespace

TEST(AmplitudeTest, EmptyDiagramIsZero) {
  for (auto m : kAmplitudeMetrics) EXPECT_EQ(amp({}, m), 0.0);
  EXPECT_EQ(persistence_entropy({}), 0.0);
  PersistenceDiagram d;
  const auto block = tda_block(d, 1);
  for (double v : block) EXPECT_EQ(v, 0.0);
}

TEST(AmplitudeTest, SingleBarIdentities) {
  EXPECT_NEAR(amp({{0, 2}}, AmplitudeMetric::Bottleneck), 1.0, 1e-12);
  EXPECT_NEAR(amp({{0, 2}}, AmplitudeMetric::Wasserstein), std::sqrt(2.0), 1e-12 * std::sqrt(2.0));
  EXPECT_NEAR(amp({{0, 2}, {0, 2}}, AmplitudeMetric::Wasserstein), 2.0, 1e-12);
  // Betti curve of one bar is the indicator of [0, 2): L2 norm sqrt(2).
  EXPECT_NEAR(amp({{0, 2}}, AmplitudeMetric::Betti), std::sqrt(2.0), 0.01);
  // Landscape of one bar: integral of tent^2 = 2/3.
  EXPECT_NEAR(amp({{0, 2}}, AmplitudeMetric::Landscape), std::sqrt(2.0 / 3.0), 1e-3);
}

TEST(AmplitudeTest, EntropyValues) {
  EXPECT_EQ(persistence_entropy(std::vector<Interval>{{0, 1}}), 0.0);
  EXPECT_NEAR(persistence_entropy(std::vector<Interval>{{0, 2}, {1, 3}}), std::log(2.0), 1e-12);
  EXPECT_NEAR(persistence_entropy(std::vector<Interval>{{0, 1}, {0, 3}}),
              -(0.25 * std::log(0.25) + 0.75 * std::log(0.75)), 1e-12);
}

TEST(AmplitudeTest, MatchesDenseOracle) {
  Rng rng(31);
  for (int trial = 0; trial < 4; ++trial) {
    const auto bars = random_bars(rng, 5);
    const AmplitudeParams p;
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
    EXPECT_LT(rel(amp(bars, AmplitudeMetric::Landscape), dense::landscape(bars)), 0.02);
    EXPECT_LT(rel(amp(bars, AmplitudeMetric::Silhouette), dense::silhouette(bars)), 0.02);
    EXPECT_LT(rel(amp(bars, AmplitudeMetric::Heat), dense::heat(bars, p.sigma)), 0.02);
    EXPECT_LT(rel(amp(bars, AmplitudeMetric::PersistenceImage), dense::persistence_image(bars, p.sigma)), 0.02);
  }
}

TEST(AmplitudeTest, PositiveHomogeneity) {
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    auto bars = random_bars(rng, 1 + uniform_index(rng, 8));
    const double c = uniform(rng, 0.1, 10.0);
    auto scaled = bars;
    for (auto& b : scaled) b = {c * b.birth, c * b.death};
    for (auto m : {AmplitudeMetric::Bottleneck, AmplitudeMetric::Wasserstein}) {
      const double a = amp(bars, m), s = amp(scaled, m);
      EXPECT_NEAR(s, c * a, 1e-12 * c * a);
    }
  }
}

TEST(AmplitudeTest, PermutationInvariance) {
  Rng rng(12);
  for (int i = 0; i < 10; ++i) {
    auto bars = random_bars(rng, 6);
    auto shuffled = bars;
    std::reverse(shuffled.begin(), shuffled.end());
    std::swap(shuffled[0], shuffled[3]);
    for (auto m : kAmplitudeMetrics) {
      const double a = amp(bars, m), b = amp(shuffled, m);
      EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::abs(a)));
    }
    EXPECT_NEAR(persistence_entropy(bars), persistence_entropy(shuffled), 1e-12);
  }
}

TEST(AmplitudeTest, WassersteinMonotoneInBars) {
  Rng rng(13);
  auto bars = random_bars(rng, 1);
  double prev = amp(bars, AmplitudeMetric::Wasserstein);
  for (int i = 0; i < 30; ++i) {
    bars.push_back(random_bars(rng, 1)[0]);
    const double now = amp(bars, AmplitudeMetric::Wasserstein);
    EXPECT_GE(now, prev);
    prev = now;
  }
}

TEST(AmplitudeTest, RejectsBadParams) {
  AmplitudeParams p;
  p.n_bins = 1;
  EXPECT_THROW(amp({{0, 1}}, AmplitudeMetric::Heat, p), std::invalid_argument);
  p = {};
  p.sigma = 0.0;
  EXPECT_THROW(amp({{0, 1}}, AmplitudeMetric::Heat, p), std::invalid_argument);
}

TEST(AmplitudeTest, SuperlevelIntervalsAreNegated) {
  PersistenceDiagram d;
  d.bars = {{3.0, 1.0, 0, false}, {2.0, 0.5, 1, false}};
  const auto h0 = normalized_intervals(d, 0);
  ASSERT_EQ(h0.size(), 1u);
  EXPECT_EQ(h0[0].birth, -3.0);
  EXPECT_EQ(h0[0].death, -1.0);
}

TEST(TdaFeaturesTest, SchemaMatchesGolden) {
  const auto golden = read_lines(std::string(GEOTOP_GOLDEN_DIR) + "/tda_schema.txt");
  const auto schema = tda_schema();
  ASSERT_EQ(schema.size(), kTdaFeatureCount);
  EXPECT_EQ(std::vector<std::string>(schema.begin(), schema.end()), golden);
}

TEST(TdaFeaturesTest, LengthAndFinite) {
  for (const auto& li : synth_dataset(4, 9)) {
    const auto fv = tda_feature_vector(preprocess(li.image));
    ASSERT_EQ(fv.size(), 64u);
    for (double v : fv.values) EXPECT_TRUE(std::isfinite(v));
  }
}

TEST(TdaFeaturesTest, ConstantImage) {
  const auto fv = tda_feature_vector(preprocess(MultiChannelImage::from_gray(ScalarField::filled(9, 9, 4.0), "c")));
  for (std::size_t ch = 0; ch < 4; ++ch) {
    for (std::size_t k = 0; k < 8; ++k) EXPECT_EQ(fv.values[ch * 16 + 8 + k], 0.0);
    EXPECT_EQ(fv.values[ch * 16 + 7], 0.0);
  }
}

TEST(TdaFeaturesTest, ReplicatedGrayGivesEqualBlocks) {
  Rng rng(6);
  const auto img = MultiChannelImage::from_gray(fixtures::random_bumps(rng, 24), "g");
  const auto fv = tda_feature_vector(img);
  for (std::size_t ch = 1; ch < 4; ++ch)
    for (std::size_t k = 0; k < 16; ++k) EXPECT_EQ(fv.values[ch * 16 + k], fv.values[k]);
}
