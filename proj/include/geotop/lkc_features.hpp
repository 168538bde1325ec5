#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "geotop/features.hpp"
#include "geotop/image.hpp"
#include "geotop/tda_features.hpp"

namespace geotop {

// Raw Lipschitz-Killing curvatures of a binary image, read as the union of
// closed unit squares of its active pixels (outside the image is inactive).

std::size_t area_raw(const BinaryImage& image);
/// Unit edges shared by exactly one active pixel (image border edges count).
std::size_t perimeter_raw(const BinaryImage& image);
/// V - E + F of the closed active squares.
long euler_raw(const BinaryImage& image);

inline constexpr std::size_t kDefaultThresholds = 200;

/// n equispaced thresholds from field.min() to field.max(); the last one is
/// exactly the maximum. A constant field yields n copies of its value.
std::vector<double> threshold_grid(const ScalarField& field, std::size_t n = kDefaultThresholds);

struct LkcOptions {
  std::size_t n_thresholds = kDefaultThresholds;
  /// Multiplier applied to the scaled perimeter curve.
  double perimeter_correction = 1.0;
};

struct LkcCurves {
  std::vector<double> thresholds;  // ascending
  std::vector<double> area;        // raw / (width * height)
  std::vector<double> perimeter;
  std::vector<double> euler;
  std::vector<std::int64_t> raw_area;
  std::vector<std::int64_t> raw_perimeter;
  std::vector<std::int64_t> raw_euler;
  std::size_t pixel_count = 0;
};

/// Sweep over all thresholds at once: every pixel, edge and vertex is
/// counted from its activation value, so the cost is one sort per cell type.
LkcCurves lkc_curves(const ScalarField& field, const LkcOptions& options = {});

/// Reference route: excursion set plus area/perimeter/euler per threshold.
LkcCurves lkc_curves_direct(const ScalarField& field, const LkcOptions& options = {});

/// Forward differences, length n - 1.
std::vector<double> derivative(std::span<const double> curve);

inline constexpr std::size_t kSummaryCount = 10;

/// [L2(f), L2(df), trapz(f, T), trapz(df, T[0..n-2]), sum f, entropy |f|,
///  entropy |df|, L0(f), L0(df), sum df]
std::array<double, kSummaryCount> summarize(std::span<const double> f, std::span<const double> df,
                                            std::span<const double> thresholds);

std::span<const std::string> summary_names();

inline constexpr std::size_t kLkcFeatureCount = 120;
inline constexpr std::size_t kGeoTopFeatureCount = 184;

/// Slot names: <channel>_<curve>_<summary>, channels x [euler, perimeter, area] x summaries.
std::span<const std::string> lkc_schema();
/// tda_schema() followed by lkc_schema().
std::span<const std::string> geotop_schema();

FeatureVector lkc_feature_vector(const MultiChannelImage& image, const LkcOptions& options = {});

struct ExtractionOptions {
  AmplitudeParams amplitude;
  LkcOptions lkc;
};

/// The 64 topological features followed by the 120 geometric ones.
FeatureVector geotop_feature_vector(const MultiChannelImage& image, const ExtractionOptions& options = {});

/// Concatenation of already computed vectors (same result as above).
FeatureVector concat_geotop(const FeatureVector& tda, const FeatureVector& lkc);

}  // namespace geotop
