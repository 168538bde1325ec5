#include "geotop/tda_features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace geotop {

std::string_view metric_name(AmplitudeMetric metric) {
  switch (metric) {
    case AmplitudeMetric::Bottleneck: return "bottleneck";
    case AmplitudeMetric::Wasserstein: return "wasserstein";
    case AmplitudeMetric::Betti: return "betti";
    case AmplitudeMetric::Landscape: return "landscape";
    case AmplitudeMetric::Silhouette: return "silhouette";
    case AmplitudeMetric::Heat: return "heat";
    case AmplitudeMetric::PersistenceImage: return "persistence_image";
  }
  return "unknown";
}

void AmplitudeParams::validate() const {
  if (!(p >= 1.0)) throw std::invalid_argument("amplitude: p must be >= 1");
  if (n_bins < 2) throw std::invalid_argument("amplitude: n_bins must be >= 2");
  if (!(sigma > 0.0)) throw std::invalid_argument("amplitude: sigma must be > 0");
  if (n_layers < 1) throw std::invalid_argument("amplitude: n_layers must be >= 1");
}

std::vector<Interval> normalized_intervals(const PersistenceDiagram& diagram, int dim) {
  std::vector<Interval> out;
  const double sign = diagram.direction == Direction::Superlevel ? -1.0 : 1.0;
  for (const auto& b : diagram.bars) {
    if (b.dim == dim) out.push_back({sign * b.birth, sign * b.death});
  }
  return out;
}

namespace {

// Equispaced grid with trapezoid weights; the weighted p-sum times the cell
// measure approximates the integral of |f|^p over [lo, hi].
struct Grid {
  double lo = 0.0;
  double step = 0.0;
  int n = 0;

  Grid(double lo_, double hi_, int n_) : lo(lo_), step((hi_ - lo_) / (n_ - 1)), n(n_) {}
  double at(int j) const { return lo + step * j; }
  double weight(int j) const { return (j == 0 || j == n - 1) ? 0.5 : 1.0; }
};

double finish_norm(double weighted_sum, double measure, double p) {
  return std::pow(weighted_sum * measure, 1.0 / p);
}

double tent(const Interval& iv, double t) {
  return std::max(0.0, std::min(t - iv.birth, iv.death - t));
}

double gaussian(double u, double sigma) {
  return std::exp(-0.5 * (u / sigma) * (u / sigma)) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

struct Extent {
  double lo, hi;
};

Extent time_extent(std::span<const Interval> bars) {
  Extent e{bars[0].birth, bars[0].death};
  for (const auto& b : bars) {
    e.lo = std::min(e.lo, b.birth);
    e.hi = std::max(e.hi, b.death);
  }
  return e;
}

double betti_amplitude(std::span<const Interval> bars, const AmplitudeParams& prm) {
  const Extent e = time_extent(bars);
  if (!(e.hi > e.lo)) return 0.0;
  const Grid grid(e.lo, e.hi, prm.n_bins);
  double sum = 0.0;
  for (int j = 0; j < grid.n; ++j) {
    const double t = grid.at(j);
    double count = 0.0;
    for (const auto& b : bars) count += (b.birth <= t && t < b.death) ? 1.0 : 0.0;
    sum += grid.weight(j) * std::pow(count, prm.p);
  }
  return finish_norm(sum, grid.step, prm.p);
}

double landscape_amplitude(std::span<const Interval> bars, const AmplitudeParams& prm) {
  const Extent e = time_extent(bars);
  if (!(e.hi > e.lo)) return 0.0;
  const Grid grid(e.lo, e.hi, prm.n_bins);
  const std::size_t layers = static_cast<std::size_t>(prm.n_layers);
  std::vector<double> tents(bars.size());
  double sum = 0.0;
  for (int j = 0; j < grid.n; ++j) {
    const double t = grid.at(j);
    for (std::size_t i = 0; i < bars.size(); ++i) tents[i] = tent(bars[i], t);
    const std::size_t top = std::min(layers, tents.size());
    std::partial_sort(tents.begin(), tents.begin() + static_cast<std::ptrdiff_t>(top), tents.end(),
                      std::greater<>());
    double layer_sum = 0.0;
    for (std::size_t k = 0; k < top; ++k) layer_sum += std::pow(tents[k], prm.p);
    sum += grid.weight(j) * layer_sum;
  }
  return finish_norm(sum, grid.step, prm.p);
}

double silhouette_amplitude(std::span<const Interval> bars, const AmplitudeParams& prm) {
  const Extent e = time_extent(bars);
  if (!(e.hi > e.lo)) return 0.0;
  std::vector<double> weights(bars.size());
  double total = 0.0;
  for (std::size_t i = 0; i < bars.size(); ++i) {
    weights[i] = std::pow(bars[i].length(), prm.power);
    total += weights[i];
  }
  if (!(total > 0.0)) return 0.0;
  const Grid grid(e.lo, e.hi, prm.n_bins);
  double sum = 0.0;
  for (int j = 0; j < grid.n; ++j) {
    const double t = grid.at(j);
    double phi = 0.0;
    for (std::size_t i = 0; i < bars.size(); ++i) phi += weights[i] * tent(bars[i], t);
    sum += grid.weight(j) * std::pow(phi / total, prm.p);
  }
  return finish_norm(sum, grid.step, prm.p);
}

// Quantized inputs repeat the same (birth, death) pair many times; the kernel
// rasters only need each distinct pair once, scaled by its multiplicity.
struct WeightedInterval {
  Interval iv;
  double count;
};

std::vector<WeightedInterval> collapse(std::span<const Interval> bars) {
  std::vector<Interval> sorted(bars.begin(), bars.end());
  std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) {
    return a.birth < b.birth || (a.birth == b.birth && a.death < b.death);
  });
  std::vector<WeightedInterval> out;
  for (const auto& b : sorted) {
    if (!out.empty() && out.back().iv.birth == b.birth && out.back().iv.death == b.death) {
      out.back().count += 1.0;
    } else {
      out.push_back({b, 1.0});
    }
  }
  return out;
}

// Raster F(x_j, y_k) = sum_i a_i(x_j) * b_i(y_k), given per-bar sampled
// factors stored bar-major.
std::vector<double> outer_sum(const std::vector<double>& a, const std::vector<double>& b,
                              std::size_t n_bars, int n) {
  const std::size_t nn = static_cast<std::size_t>(n);
  std::vector<double> raster(nn * nn, 0.0);
  for (std::size_t i = 0; i < n_bars; ++i) {
    const double* ai = a.data() + i * nn;
    const double* bi = b.data() + i * nn;
    for (std::size_t j = 0; j < nn; ++j) {
      const double aj = ai[j];
      if (aj == 0.0) continue;
      double* row = raster.data() + j * nn;
      for (std::size_t k = 0; k < nn; ++k) row[k] += aj * bi[k];
    }
  }
  return raster;
}

double raster_norm(const std::vector<double>& raster, const Grid& grid, double p) {
  double sum = 0.0;
  for (int j = 0; j < grid.n; ++j) {
    for (int k = 0; k < grid.n; ++k) {
      sum += grid.weight(j) * grid.weight(k) *
             std::pow(std::abs(raster[static_cast<std::size_t>(j) * grid.n + k]), p);
    }
  }
  return finish_norm(sum, grid.step * grid.step, p);
}

double heat_amplitude(std::span<const Interval> all, const AmplitudeParams& prm) {
  const Extent e = time_extent(all);
  const auto bars = collapse(all);
  const double side = e.hi - e.lo;
  if (!(side > 0.0)) return 0.0;
  const Grid grid(e.lo, e.hi, prm.n_bins);
  const double sigma = prm.sigma * side;
  const std::size_t nn = static_cast<std::size_t>(grid.n);
  std::vector<double> gb(bars.size() * nn), gd(bars.size() * nn);
  for (std::size_t i = 0; i < bars.size(); ++i) {
    for (std::size_t j = 0; j < nn; ++j) {
      const double x = grid.at(static_cast<int>(j));
      gb[i * nn + j] = bars[i].count * gaussian(x - bars[i].iv.birth, sigma);
      gd[i * nn + j] = gaussian(x - bars[i].iv.death, sigma);
    }
  }
  // Kernel at (b, d) minus its reflection at (d, b): F = M - M^T with
  // M[j][k] = sum_i gb_i(x_j) gd_i(x_k).
  std::vector<double> m = outer_sum(gb, gd, bars.size(), grid.n);
  std::vector<double> f(m.size());
  for (std::size_t j = 0; j < nn; ++j) {
    for (std::size_t k = 0; k < nn; ++k) f[j * nn + k] = m[j * nn + k] - m[k * nn + j];
  }
  return raster_norm(f, grid, prm.p);
}

double persistence_image_amplitude(std::span<const Interval> all, const AmplitudeParams& prm) {
  double bmin = all[0].birth, bmax = all[0].birth, lmax = 0.0;
  for (const auto& b : all) {
    bmin = std::min(bmin, b.birth);
    bmax = std::max(bmax, b.birth);
    lmax = std::max(lmax, b.length());
  }
  const double side = std::max(bmax - bmin, lmax);
  if (!(side > 0.0)) return 0.0;
  const double center = 0.5 * (bmin + bmax);
  const Grid birth_axis(center - side / 2.0, center + side / 2.0, prm.n_bins);
  const Grid pers_axis(0.0, side, prm.n_bins);
  const double sigma = prm.sigma * side;
  const std::size_t nn = static_cast<std::size_t>(prm.n_bins);
  const auto bars = collapse(all);
  std::vector<double> gx(bars.size() * nn), gy(bars.size() * nn);
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double weight = bars[i].count * bars[i].iv.length();
    for (std::size_t j = 0; j < nn; ++j) {
      gx[i * nn + j] = weight * gaussian(birth_axis.at(static_cast<int>(j)) - bars[i].iv.birth, sigma);
      gy[i * nn + j] = gaussian(pers_axis.at(static_cast<int>(j)) - bars[i].iv.length(), sigma);
    }
  }
  return raster_norm(outer_sum(gx, gy, bars.size(), prm.n_bins), birth_axis, prm.p);
}

}  // namespace

double amplitude(std::span<const Interval> bars, const AmplitudeConfig& config) {
  const auto& prm = config.params;
  prm.validate();
  if (bars.empty()) return 0.0;
  switch (config.metric) {
    case AmplitudeMetric::Bottleneck: {
      double best = 0.0;
      for (const auto& b : bars) best = std::max(best, b.length());
      return best / 2.0;
    }
    case AmplitudeMetric::Wasserstein: {
      double sum = 0.0;
      for (const auto& b : bars) sum += std::pow(b.length() / std::numbers::sqrt2, prm.p);
      return std::pow(sum, 1.0 / prm.p);
    }
    case AmplitudeMetric::Betti: return betti_amplitude(bars, prm);
    case AmplitudeMetric::Landscape: return landscape_amplitude(bars, prm);
    case AmplitudeMetric::Silhouette: return silhouette_amplitude(bars, prm);
    case AmplitudeMetric::Heat: return heat_amplitude(bars, prm);
    case AmplitudeMetric::PersistenceImage: return persistence_image_amplitude(bars, prm);
  }
  return 0.0;
}

double amplitude(const PersistenceDiagram& diagram, int dim, const AmplitudeConfig& config) {
  const auto bars = normalized_intervals(diagram, dim);
  return amplitude(bars, config);
}

double persistence_entropy(std::span<const Interval> bars) {
  double total = 0.0;
  for (const auto& b : bars) {
    if (b.length() > 0.0) total += b.length();
  }
  if (!(total > 0.0)) return 0.0;
  double h = 0.0;
  for (const auto& b : bars) {
    if (b.length() > 0.0) {
      const double q = b.length() / total;
      h -= q * std::log(q);
    }
  }
  return h;
}

std::span<const std::string> tda_schema() {
  static const std::vector<std::string> schema = [] {
    std::vector<std::string> names;
    for (Channel ch : kChannels) {
      for (int dim = 0; dim < 2; ++dim) {
        const std::string prefix = std::string(channel_name(ch)) + "_h" + std::to_string(dim) + "_";
        for (AmplitudeMetric m : kAmplitudeMetrics) names.push_back(prefix + std::string(metric_name(m)));
        names.push_back(prefix + "entropy");
      }
    }
    return names;
  }();
  return schema;
}

std::array<double, 8> tda_block(const PersistenceDiagram& diagram, int dim, const AmplitudeParams& params) {
  const auto bars = normalized_intervals(diagram, dim);
  std::array<double, 8> out{};
  for (std::size_t k = 0; k < kAmplitudeMetrics.size(); ++k) {
    out[k] = amplitude(bars, AmplitudeConfig{kAmplitudeMetrics[k], params});
  }
  out[7] = persistence_entropy(bars);
  return out;
}

FeatureVector tda_feature_vector(const MultiChannelImage& image, const AmplitudeParams& params) {
  params.validate();
  FeatureVector fv;
  fv.schema = tda_schema();
  fv.values.reserve(kTdaFeatureCount);
  for (Channel ch : kChannels) {
    const PersistenceDiagram diagram = superlevel_diagram(image.channel(ch));
    for (int dim = 0; dim < 2; ++dim) {
      const auto block = tda_block(diagram, dim, params);
      fv.values.insert(fv.values.end(), block.begin(), block.end());
    }
  }
  return fv;
}

}  // namespace geotop
