#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace geotop {

/// Row-major 2-D grid of finite reals.
class ScalarField {
 public:
  ScalarField() = default;
  /// Throws std::invalid_argument on a size mismatch or a non-finite value.
  ScalarField(std::size_t width, std::size_t height, std::vector<double> values);

  static ScalarField filled(std::size_t width, std::size_t height, double value);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  std::span<const double> values() const { return values_; }
  double operator()(std::size_t row, std::size_t col) const { return values_[row * width_ + col]; }
  double operator[](std::size_t index) const { return values_[index]; }

  double min() const;
  double max() const;
  double mean() const;

  bool operator==(const ScalarField&) const = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> values_;
};

/// Excursion-set mask: mask[i] is 1 when the source pixel is >= threshold.
struct BinaryImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> mask;
  double threshold = 0.0;

  BinaryImage() = default;
  BinaryImage(std::size_t w, std::size_t h, std::vector<std::uint8_t> m, double t = 0.0);

  bool operator()(std::size_t row, std::size_t col) const { return mask[row * width + col] != 0; }
  std::size_t size() const { return mask.size(); }
};

enum class Channel : std::size_t { Gray = 0, Red = 1, Green = 2, Blue = 3 };

inline constexpr std::array<Channel, 4> kChannels = {Channel::Gray, Channel::Red, Channel::Green,
                                                     Channel::Blue};

std::string_view channel_name(Channel c);

/// Four equally sized channels in the fixed order [gray, red, green, blue].
class MultiChannelImage {
 public:
  MultiChannelImage() = default;
  /// Throws std::invalid_argument unless all channels share one shape.
  MultiChannelImage(std::array<ScalarField, 4> channels, std::string source_id);

  /// Gray is derived with Rec.601 luminance weights.
  static MultiChannelImage from_rgb(const ScalarField& red, const ScalarField& green,
                                    const ScalarField& blue, std::string source_id);
  /// Gray replicated into the red, green and blue slots.
  static MultiChannelImage from_gray(const ScalarField& gray, std::string source_id);

  std::size_t width() const { return channels_[0].width(); }
  std::size_t height() const { return channels_[0].height(); }
  const ScalarField& channel(Channel c) const { return channels_[static_cast<std::size_t>(c)]; }
  const std::array<ScalarField, 4>& channels() const { return channels_; }
  const std::string& source_id() const { return source_id_; }

 private:
  std::array<ScalarField, 4> channels_;
  std::string source_id_;
};

inline constexpr double kLumaRed = 0.299;
inline constexpr double kLumaGreen = 0.587;
inline constexpr double kLumaBlue = 0.114;

/// Raised for unreadable or malformed image files; the message carries the path.
class ImageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads PNG or binary/ASCII PGM/PPM (8 or 16 bit). Grayscale inputs are
/// replicated into all four channels.
MultiChannelImage load_image(const std::filesystem::path& path);

/// Writes a binary PGM. Values are rounded and must fit in [0, maxval];
/// maxval <= 255 gives 8-bit samples, otherwise 16-bit big-endian.
void save_pgm(const std::filesystem::path& path, const ScalarField& field, unsigned maxval = 255);
/// Writes a binary PPM from the red, green and blue channels.
void save_ppm(const std::filesystem::path& path, const MultiChannelImage& image,
              unsigned maxval = 255);

/// Polarity fix (bright object convention) followed by per-channel
/// standardization to mean 0 and standard deviation 1.
MultiChannelImage preprocess(const MultiChannelImage& image);

/// True when the gray border frame is brighter than the gray center.
bool needs_polarity_flip(const ScalarField& gray);

BinaryImage excursion_set(const ScalarField& field, double threshold);

// Synthetic inputs.

/// n x n gray field: centered isotropic Gaussian density bump plus a
/// square_side x square_side patch in the southeast corner set to the bump's
/// maximum. Optional additive uniform noise in [-noise, noise] drawn from seed.
/// Throws std::invalid_argument when square_side >= n / 2.
MultiChannelImage synth_gaussian_square(std::size_t n, std::size_t square_side, std::uint64_t seed,
                                        double noise = 0.0);

struct LabeledImage {
  MultiChannelImage image;
  int label = 0;
};

inline constexpr std::array<std::string_view, 2> kSynthClassNames = {"benign", "malignant"};

/// Balanced two-class set of 8-bit RGB images: label 0 holds a single smooth
/// blob, label 1 a multi-lobed irregular blob. Deterministic given seed.
std::vector<LabeledImage> synth_dataset(std::size_t n_images, std::uint64_t seed,
                                        std::size_t side = 64);

// Dataset directories laid out as <root>/<class_name>/<image>.

struct DatasetEntry {
  std::filesystem::path path;
  std::string source_id;  // "<class_name>/<file name>"
  int label = 0;
};

struct DatasetListing {
  std::vector<std::string> class_names;  // sorted; index == label
  std::vector<DatasetEntry> entries;     // sorted by (label, file name)
};

/// Lists image files (.png, .pgm, .ppm, .pnm). Throws ImageError when the
/// root is missing or holds no class directories.
DatasetListing list_dataset(const std::filesystem::path& root);

}  // namespace geotop
