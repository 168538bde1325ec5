#include "geotop/lkc_features.hpp"

#include <algorithm>
#include <cmath>

namespace geotop {

std::size_t area_raw(const BinaryImage& image) {
  return static_cast<std::size_t>(std::count(image.mask.begin(), image.mask.end(), 1));
}

std::size_t perimeter_raw(const BinaryImage& image) {
  const std::size_t w = image.width, h = image.height;
  const auto& m = image.mask;
  if (w == 0 || h == 0) return 0;
  std::size_t edges = 0;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const bool here = m[r * w + c] != 0;
      // Vertical edge to the left of pixel (r, c) and horizontal edge above it.
      const bool left = c > 0 && m[r * w + c - 1] != 0;
      const bool up = r > 0 && m[(r - 1) * w + c] != 0;
      edges += here != left;
      edges += here != up;
    }
    edges += m[r * w + w - 1] != 0;  // right image border
  }
  for (std::size_t c = 0; c < w; ++c) edges += m[(h - 1) * w + c] != 0;  // bottom border
  return edges;
}

long euler_raw(const BinaryImage& image) {
  const long w = static_cast<long>(image.width), h = static_cast<long>(image.height);
  auto on = [&](long r, long c) {
    return r >= 0 && c >= 0 && r < h && c < w && image.mask[static_cast<std::size_t>(r * w + c)] != 0;
  };
  long faces = 0, edges = 0, vertices = 0;
  // Vertex (i, j) is the corner shared by pixels (i-1..i, j-1..j).
  for (long i = 0; i <= h; ++i) {
    for (long j = 0; j <= w; ++j) {
      if (on(i - 1, j - 1) || on(i - 1, j) || on(i, j - 1) || on(i, j)) ++vertices;
      if (j < w && (on(i - 1, j) || on(i, j))) ++edges;  // horizontal edge
      if (i < h && (on(i, j - 1) || on(i, j))) ++edges;  // vertical edge
      if (i < h && j < w && on(i, j)) ++faces;
    }
  }
  return vertices - edges + faces;
}

std::vector<double> threshold_grid(const ScalarField& field, std::size_t n) {
  if (n < 2) throw std::invalid_argument("threshold_grid: need at least 2 thresholds");
  const double lo = field.min(), hi = field.max();
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) {
    t[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  t.front() = lo;
  t.back() = hi;
  return t;
}

namespace {

// Count of activation values >= t for every ascending threshold t.
std::vector<std::int64_t> count_at_least(std::vector<double>& activation, const std::vector<double>& thresholds) {
  std::sort(activation.begin(), activation.end());
  std::vector<std::int64_t> out(thresholds.size());
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    const auto it = std::lower_bound(activation.begin(), activation.end(), thresholds[k]);
    out[k] = static_cast<std::int64_t>(activation.end() - it);
  }
  return out;
}

void scale_curves(LkcCurves& curves, double perimeter_correction) {
  const double denom = static_cast<double>(curves.pixel_count);
  const std::size_t n = curves.thresholds.size();
  curves.area.resize(n);
  curves.perimeter.resize(n);
  curves.euler.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    curves.area[k] = static_cast<double>(curves.raw_area[k]) / denom;
    curves.perimeter[k] = perimeter_correction * static_cast<double>(curves.raw_perimeter[k]) / denom;
    curves.euler[k] = static_cast<double>(curves.raw_euler[k]) / denom;
  }
}

}  // namespace

LkcCurves lkc_curves(const ScalarField& field, const LkcOptions& options) {
  LkcCurves curves;
  curves.thresholds = threshold_grid(field, options.n_thresholds);
  curves.pixel_count = field.size();
  const std::size_t w = field.width(), h = field.height();

  // A cell of the closed-square union is present at t once any incident
  // pixel is >= t, i.e. from the max of its incident pixels.
  std::vector<double> pixels(field.values().begin(), field.values().end());
  std::vector<double> any_edge, both_edge, vertices;
  any_edge.reserve(2 * w * h + w + h);
  both_edge.reserve(2 * w * h);
  vertices.reserve((w + 1) * (h + 1));
  const double lowest = -std::numeric_limits<double>::infinity();
  auto px = [&](std::ptrdiff_t r, std::ptrdiff_t c) {
    if (r < 0 || c < 0 || r >= static_cast<std::ptrdiff_t>(h) || c >= static_cast<std::ptrdiff_t>(w)) return lowest;
    return field(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  };
  for (std::ptrdiff_t i = 0; i <= static_cast<std::ptrdiff_t>(h); ++i) {
    for (std::ptrdiff_t j = 0; j <= static_cast<std::ptrdiff_t>(w); ++j) {
      vertices.push_back(std::max({px(i - 1, j - 1), px(i - 1, j), px(i, j - 1), px(i, j)}));
      if (j < static_cast<std::ptrdiff_t>(w)) {
        const double a = px(i - 1, j), b = px(i, j);
        any_edge.push_back(std::max(a, b));
        if (i > 0 && i < static_cast<std::ptrdiff_t>(h)) both_edge.push_back(std::min(a, b));
      }
      if (i < static_cast<std::ptrdiff_t>(h)) {
        const double a = px(i, j - 1), b = px(i, j);
        any_edge.push_back(std::max(a, b));
        if (j > 0 && j < static_cast<std::ptrdiff_t>(w)) both_edge.push_back(std::min(a, b));
      }
    }
  }
  const auto f = count_at_least(pixels, curves.thresholds);
  const auto e_any = count_at_least(any_edge, curves.thresholds);
  const auto e_both = count_at_least(both_edge, curves.thresholds);
  const auto v = count_at_least(vertices, curves.thresholds);
  const std::size_t n = curves.thresholds.size();
  curves.raw_area = f;
  curves.raw_perimeter.resize(n);
  curves.raw_euler.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    curves.raw_perimeter[k] = e_any[k] - e_both[k];
    curves.raw_euler[k] = v[k] - e_any[k] + f[k];
  }
  scale_curves(curves, options.perimeter_correction);
  return curves;
}

LkcCurves lkc_curves_direct(const ScalarField& field, const LkcOptions& options) {
  LkcCurves curves;
  curves.thresholds = threshold_grid(field, options.n_thresholds);
  curves.pixel_count = field.size();
  for (double t : curves.thresholds) {
    const BinaryImage set = excursion_set(field, t);
    curves.raw_area.push_back(static_cast<std::int64_t>(area_raw(set)));
    curves.raw_perimeter.push_back(static_cast<std::int64_t>(perimeter_raw(set)));
    curves.raw_euler.push_back(euler_raw(set));
  }
  scale_curves(curves, options.perimeter_correction);
  return curves;
}

std::vector<double> derivative(std::span<const double> curve) {
  if (curve.size() < 2) return {};
  std::vector<double> d(curve.size() - 1);
  for (std::size_t k = 0; k + 1 < curve.size(); ++k) d[k] = curve[k + 1] - curve[k];
  return d;
}

namespace {

double l2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double trapz(std::span<const double> y, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < y.size(); ++k) s += 0.5 * (y[k] + y[k + 1]) * (x[k + 1] - x[k]);
  return s;
}

double sum(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

double abs_entropy(std::span<const double> v) {
  double total = 0.0;
  for (double x : v) total += std::abs(x);
  if (!(total > 0.0)) return 0.0;
  double h = 0.0;
  for (double x : v) {
    if (x != 0.0) {
      const double q = std::abs(x) / total;
      h -= q * std::log(q);
    }
  }
  return h;
}

double nonzero(std::span<const double> v) {
  return static_cast<double>(std::count_if(v.begin(), v.end(), [](double x) { return x != 0.0; }));
}

}  // namespace

std::array<double, kSummaryCount> summarize(std::span<const double> f, std::span<const double> df,
                                            std::span<const double> thresholds) {
  if (thresholds.size() != f.size() || df.size() + 1 != f.size()) {
    throw std::invalid_argument("summarize: expected |f| == |T| and |df| == |f| - 1");
  }
  return {l2(f),
          l2(df),
          trapz(f, thresholds),
          trapz(df, thresholds.first(df.size())),
          sum(f),
          abs_entropy(f),
          abs_entropy(df),
          nonzero(f),
          nonzero(df),
          sum(df)};
}

std::span<const std::string> summary_names() {
  static const std::vector<std::string> names = {"l2_f",      "l2_df",      "integral_f", "integral_df",
                                                 "sum_f",     "entropy_f",  "entropy_df", "l0_f",
                                                 "l0_df",     "sum_df"};
  return names;
}

namespace {

constexpr std::array<const char*, 3> kCurveNames = {"euler", "perimeter", "area"};

}  // namespace

std::span<const std::string> lkc_schema() {
  static const std::vector<std::string> schema = [] {
    std::vector<std::string> names;
    for (Channel ch : kChannels) {
      for (const char* curve : kCurveNames) {
        for (const auto& s : summary_names()) {
          names.push_back(std::string(channel_name(ch)) + "_" + curve + "_" + s);
        }
      }
    }
    return names;
  }();
  return schema;
}

std::span<const std::string> geotop_schema() {
  static const std::vector<std::string> schema = [] {
    std::vector<std::string> names(tda_schema().begin(), tda_schema().end());
    names.insert(names.end(), lkc_schema().begin(), lkc_schema().end());
    return names;
  }();
  return schema;
}

FeatureVector lkc_feature_vector(const MultiChannelImage& image, const LkcOptions& options) {
  FeatureVector fv;
  fv.schema = lkc_schema();
  fv.values.reserve(kLkcFeatureCount);
  for (Channel ch : kChannels) {
    const LkcCurves curves = lkc_curves(image.channel(ch), options);
    for (const auto* curve : {&curves.euler, &curves.perimeter, &curves.area}) {
      const auto d = derivative(*curve);
      const auto s = summarize(*curve, d, curves.thresholds);
      fv.values.insert(fv.values.end(), s.begin(), s.end());
    }
  }
  return fv;
}

FeatureVector concat_geotop(const FeatureVector& tda, const FeatureVector& lkc) {
  if (tda.size() != kTdaFeatureCount || lkc.size() != kLkcFeatureCount) {
    throw std::invalid_argument("concat_geotop: expected 64 + 120 features");
  }
  FeatureVector fv;
  fv.schema = geotop_schema();
  fv.values = tda.values;
  fv.values.insert(fv.values.end(), lkc.values.begin(), lkc.values.end());
  return fv;
}

FeatureVector geotop_feature_vector(const MultiChannelImage& image, const ExtractionOptions& options) {
  return concat_geotop(tda_feature_vector(image, options.amplitude), lkc_feature_vector(image, options.lkc));
}

}  // namespace geotop
