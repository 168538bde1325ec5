#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "geotop/image.hpp"
#include "geotop/rng.hpp"

namespace geotop {

MultiChannelImage synth_gaussian_square(std::size_t n, std::size_t square_side, std::uint64_t seed,
                                        double noise) {
  if (2 * square_side >= n) {
    throw std::invalid_argument("synth_gaussian_square: square side must be < n/2");
  }
  const double center = (static_cast<double>(n) - 1.0) / 2.0;
  const double sigma = static_cast<double>(n) / 6.0;
  const double norm = 1.0 / (2.0 * std::numbers::pi * sigma * sigma);
  std::vector<double> values(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double dr = static_cast<double>(r) - center;
      const double dc = static_cast<double>(c) - center;
      values[r * n + c] = norm * std::exp(-(dr * dr + dc * dc) / (2.0 * sigma * sigma));
    }
  }
  const double peak = *std::max_element(values.begin(), values.end());
  for (std::size_t r = n - square_side; r < n; ++r) {
    for (std::size_t c = n - square_side; c < n; ++c) values[r * n + c] = peak;
  }
  if (noise > 0.0) {
    Rng rng(seed);
    for (auto& v : values) v += uniform(rng, -noise, noise);
  }
  return MultiChannelImage::from_gray(ScalarField(n, n, std::move(values)), "gaussian_square");
}

namespace {

struct Rgb {
  double r, g, b;
};

// Lesion opacity in [0, 1] for a single smooth elliptical blob.
std::vector<double> smooth_blob(std::size_t side, Rng& rng) {
  const double s = static_cast<double>(side);
  const double cy = s / 2.0 + uniform(rng, -0.06, 0.06) * s;
  const double cx = s / 2.0 + uniform(rng, -0.06, 0.06) * s;
  const double radius = uniform(rng, 0.13, 0.2) * s;
  const double aspect = uniform(rng, 0.8, 1.25);
  const double angle = uniform(rng, 0.0, std::numbers::pi);
  const double ca = std::cos(angle), sa = std::sin(angle);
  std::vector<double> op(side * side);
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      const double y = static_cast<double>(r) - cy;
      const double x = static_cast<double>(c) - cx;
      const double u = (ca * x + sa * y) / (radius * aspect);
      const double v = (-sa * x + ca * y) * aspect / radius;
      op[r * side + c] = std::exp(-0.5 * (u * u + v * v));
    }
  }
  return op;
}

// Several well separated lobes with a rough, speckled interior.
std::vector<double> lobed_blob(std::size_t side, Rng& rng) {
  const double s = static_cast<double>(side);
  const double cy = s / 2.0 + uniform(rng, -0.05, 0.05) * s;
  const double cx = s / 2.0 + uniform(rng, -0.05, 0.05) * s;
  const std::size_t lobes = 3 + uniform_index(rng, 3);
  const double phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  struct Lobe {
    double y, x, radius, weight;
  };
  std::vector<Lobe> parts;
  for (std::size_t k = 0; k < lobes; ++k) {
    const double a = phase + 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(lobes) +
                     uniform(rng, -0.3, 0.3);
    const double d = uniform(rng, 0.15, 0.22) * s;
    parts.push_back({cy + d * std::sin(a), cx + d * std::cos(a), uniform(rng, 0.05, 0.08) * s,
                     uniform(rng, 0.75, 1.0)});
  }
  std::vector<double> op(side * side);
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      double best = 0.0;
      for (const auto& p : parts) {
        const double dy = (static_cast<double>(r) - p.y) / p.radius;
        const double dx = (static_cast<double>(c) - p.x) / p.radius;
        best = std::max(best, p.weight * std::exp(-0.5 * (dx * dx + dy * dy)));
      }
      op[r * side + c] = best * uniform(rng, 0.7, 1.0);
    }
  }
  return op;
}

MultiChannelImage render(const std::vector<double>& opacity, std::size_t side, Rng& rng,
                         std::string id) {
  const Rgb skin{uniform(rng, 195, 220), uniform(rng, 150, 175), uniform(rng, 125, 150)};
  const Rgb lesion{uniform(rng, 70, 110), uniform(rng, 40, 70), uniform(rng, 30, 55)};
  const double shade_y = uniform(rng, -12.0, 12.0);
  const double shade_x = uniform(rng, -12.0, 12.0);
  const double s = static_cast<double>(side);
  std::array<std::vector<double>, 3> ch;
  for (auto& c : ch) c.resize(side * side);
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      const std::size_t i = r * side + c;
      const double shade = shade_y * (static_cast<double>(r) / s - 0.5) +
                           shade_x * (static_cast<double>(c) / s - 0.5);
      const double a = std::clamp(opacity[i], 0.0, 1.0);
      const double base[3] = {skin.r, skin.g, skin.b};
      const double dark[3] = {lesion.r, lesion.g, lesion.b};
      for (std::size_t k = 0; k < 3; ++k) {
        const double v = (base[k] + shade) * (1.0 - a) + dark[k] * a + 3.0 * standard_normal(rng);
        ch[k][i] = std::clamp(std::round(v), 0.0, 255.0);
      }
    }
  }
  return MultiChannelImage::from_rgb(ScalarField(side, side, std::move(ch[0])),
                                     ScalarField(side, side, std::move(ch[1])),
                                     ScalarField(side, side, std::move(ch[2])), std::move(id));
}

}  // namespace

std::vector<LabeledImage> synth_dataset(std::size_t n_images, std::uint64_t seed, std::size_t side) {
  if (n_images < 2) throw std::invalid_argument("synth_dataset: need at least 2 images");
  if (side < 16) throw std::invalid_argument("synth_dataset: side must be at least 16");
  std::vector<LabeledImage> out;
  out.reserve(n_images);
  for (std::size_t i = 0; i < n_images; ++i) {
    const int label = static_cast<int>(i % 2);
    Rng rng(derive_seed(seed, i));
    const auto opacity = label == 0 ? smooth_blob(side, rng) : lobed_blob(side, rng);
    char name[32];
    std::snprintf(name, sizeof name, "img_%04zu.ppm", i);
    std::string id = std::string(kSynthClassNames[label]) + "/" + name;
    out.push_back({render(opacity, side, rng, std::move(id)), label});
  }
  return out;
}

}  // namespace geotop
