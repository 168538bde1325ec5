#pragma once

#include <span>
#include <string>
#include <vector>

#include "geotop/features.hpp"
#include "geotop/image.hpp"
#include "geotop/persistence.hpp"

namespace geotop {

enum class AmplitudeMetric { Bottleneck, Wasserstein, Betti, Landscape, Silhouette, Heat, PersistenceImage };

inline constexpr std::array<AmplitudeMetric, 7> kAmplitudeMetrics = {
    AmplitudeMetric::Bottleneck, AmplitudeMetric::Wasserstein, AmplitudeMetric::Betti,
    AmplitudeMetric::Landscape,  AmplitudeMetric::Silhouette,  AmplitudeMetric::Heat,
    AmplitudeMetric::PersistenceImage};

std::string_view metric_name(AmplitudeMetric metric);

/// Shared knobs of the sampled amplitudes. sigma is a fraction of the
/// diagram's raster extent.
struct AmplitudeParams {
  double p = 2.0;
  int n_bins = 100;
  double sigma = 0.1;
  int n_layers = 1;
  double power = 1.0;

  /// Throws std::invalid_argument unless p >= 1, n_bins >= 2, sigma > 0 and n_layers >= 1.
  void validate() const;
};

struct AmplitudeConfig {
  AmplitudeMetric metric = AmplitudeMetric::Wasserstein;
  AmplitudeParams params;
};

/// A bar in sublevel orientation: birth <= death.
struct Interval {
  double birth = 0.0;
  double death = 0.0;
  double length() const { return death - birth; }
};

/// Dim-k bars of a diagram with superlevel bars (b, d) mapped to (-b, -d).
std::vector<Interval> normalized_intervals(const PersistenceDiagram& diagram, int dim);

/// Distance of the diagram from the empty diagram under the chosen metric;
/// 0 for an empty diagram. Sampled metrics use trapezoidal quadrature on an
/// equispaced grid over the diagram's own extent.
double amplitude(std::span<const Interval> intervals, const AmplitudeConfig& config);
double amplitude(const PersistenceDiagram& diagram, int dim, const AmplitudeConfig& config);

/// Shannon entropy (natural log) of normalized persistences; 0 when empty.
double persistence_entropy(std::span<const Interval> intervals);

inline constexpr std::size_t kTdaFeatureCount = 64;

/// Slot names: <channel>_h<dim>_<feature>, channels x dims x (7 metrics, entropy).
std::span<const std::string> tda_schema();

/// The 8 features of one (channel, dimension) block in schema order.
std::array<double, 8> tda_block(const PersistenceDiagram& diagram, int dim, const AmplitudeParams& params = {});

FeatureVector tda_feature_vector(const MultiChannelImage& image, const AmplitudeParams& params = {});

}  // namespace geotop
