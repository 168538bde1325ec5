#include "geotop/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace geotop {

ScalarField::ScalarField(std::size_t width, std::size_t height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (values_.size() != width_ * height_) {
    throw std::invalid_argument("ScalarField: " + std::to_string(values_.size()) +
                                " values for a " + std::to_string(width_) + "x" +
                                std::to_string(height_) + " grid");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("ScalarField: non-finite pixel value");
  }
}

ScalarField ScalarField::filled(std::size_t width, std::size_t height, double value) {
  return ScalarField(width, height, std::vector<double>(width * height, value));
}

double ScalarField::min() const {
  if (values_.empty()) throw std::logic_error("ScalarField::min on empty field");
  return *std::min_element(values_.begin(), values_.end());
}

double ScalarField::max() const {
  if (values_.empty()) throw std::logic_error("ScalarField::max on empty field");
  return *std::max_element(values_.begin(), values_.end());
}

double ScalarField::mean() const {
  if (values_.empty()) throw std::logic_error("ScalarField::mean on empty field");
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(size());
}

BinaryImage::BinaryImage(std::size_t w, std::size_t h, std::vector<std::uint8_t> m, double t)
    : width(w), height(h), mask(std::move(m)), threshold(t) {
  if (mask.size() != width * height) throw std::invalid_argument("BinaryImage: size mismatch");
}

std::string_view channel_name(Channel c) {
  switch (c) {
    case Channel::Gray: return "gray";
    case Channel::Red: return "red";
    case Channel::Green: return "green";
    case Channel::Blue: return "blue";
  }
  return "unknown";
}

MultiChannelImage::MultiChannelImage(std::array<ScalarField, 4> channels, std::string source_id)
    : channels_(std::move(channels)), source_id_(std::move(source_id)) {
  for (const auto& ch : channels_) {
    if (ch.width() != channels_[0].width() || ch.height() != channels_[0].height()) {
      throw std::invalid_argument("MultiChannelImage: channel shapes differ");
    }
  }
}

MultiChannelImage MultiChannelImage::from_rgb(const ScalarField& red, const ScalarField& green,
                                              const ScalarField& blue, std::string source_id) {
  if (red.width() != green.width() || red.width() != blue.width() ||
      red.height() != green.height() || red.height() != blue.height()) {
    throw std::invalid_argument("MultiChannelImage::from_rgb: channel shapes differ");
  }
  std::vector<double> gray(red.size());
  for (std::size_t i = 0; i < gray.size(); ++i) {
    gray[i] = kLumaRed * red[i] + kLumaGreen * green[i] + kLumaBlue * blue[i];
  }
  return MultiChannelImage({ScalarField(red.width(), red.height(), std::move(gray)), red, green, blue},
                           std::move(source_id));
}

MultiChannelImage MultiChannelImage::from_gray(const ScalarField& gray, std::string source_id) {
  return MultiChannelImage({gray, gray, gray, gray}, std::move(source_id));
}

namespace {

double region_mean(const ScalarField& f, auto&& in_region) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t r = 0; r < f.height(); ++r) {
    for (std::size_t c = 0; c < f.width(); ++c) {
      if (in_region(r, c)) {
        sum += f(r, c);
        ++count;
      }
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

ScalarField standardize(const ScalarField& f, double sign) {
  const double n = static_cast<double>(f.size());
  double mean = 0.0;
  for (double v : f.values()) mean += sign * v;
  mean /= n;
  double var = 0.0;
  for (double v : f.values()) var += (sign * v - mean) * (sign * v - mean);
  const double sd = std::sqrt(var / n);
  std::vector<double> out(f.size(), 0.0);
  if (sd > 0.0) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (sign * f[i] - mean) / sd;
  }
  return ScalarField(f.width(), f.height(), std::move(out));
}

}  // namespace

bool needs_polarity_flip(const ScalarField& gray) {
  const std::size_t h = gray.height();
  const std::size_t w = gray.width();
  if (h == 0 || w == 0) return false;
  // Border frame: outermost 10% of rows and columns (at least one).
  const std::size_t fr = std::max<std::size_t>(1, h / 10);
  const std::size_t fc = std::max<std::size_t>(1, w / 10);
  // Center: the middle 50% along each axis.
  const std::size_t r0 = h / 4, r1 = std::max(r0 + 1, h - h / 4);
  const std::size_t c0 = w / 4, c1 = std::max(c0 + 1, w - w / 4);
  const double border = region_mean(gray, [&](std::size_t r, std::size_t c) {
    return r < fr || r >= h - fr || c < fc || c >= w - fc;
  });
  const double center = region_mean(gray, [&](std::size_t r, std::size_t c) {
    return r >= r0 && r < r1 && c >= c0 && c < c1;
  });
  return border > center;
}

MultiChannelImage preprocess(const MultiChannelImage& image) {
  const double sign = needs_polarity_flip(image.channel(Channel::Gray)) ? -1.0 : 1.0;
  std::array<ScalarField, 4> out;
  for (std::size_t k = 0; k < 4; ++k) out[k] = standardize(image.channels()[k], sign);
  return MultiChannelImage(std::move(out), image.source_id());
}

BinaryImage excursion_set(const ScalarField& field, double threshold) {
  std::vector<std::uint8_t> mask(field.size());
  const auto v = field.values();
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = v[i] >= threshold ? 1 : 0;
  return BinaryImage(field.width(), field.height(), std::move(mask), threshold);
}

}  // namespace geotop
