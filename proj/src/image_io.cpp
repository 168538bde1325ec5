#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>

#include "geotop/image.hpp"

namespace geotop {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const fs::path& path, const std::string& what) {
  throw ImageError(path.string() + ": " + what);
}

struct RawImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t components = 0;  // 1 = gray, 3 = rgb
  std::vector<double> samples;  // interleaved
};

MultiChannelImage to_channels(const RawImage& raw, const fs::path& path) {
  const std::size_t n = raw.width * raw.height;
  std::string id = path.filename().string();
  if (raw.components == 1) {
    return MultiChannelImage::from_gray(ScalarField(raw.width, raw.height, raw.samples), std::move(id));
  }
  std::array<std::vector<double>, 3> rgb;
  for (auto& c : rgb) c.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < 3; ++k) rgb[k][i] = raw.samples[i * 3 + k];
  }
  return MultiChannelImage::from_rgb(ScalarField(raw.width, raw.height, std::move(rgb[0])),
                                     ScalarField(raw.width, raw.height, std::move(rgb[1])),
                                     ScalarField(raw.width, raw.height, std::move(rgb[2])),
                                     std::move(id));
}

// --- PNM ------------------------------------------------------------------

class PnmReader {
 public:
  PnmReader(std::vector<unsigned char> bytes, const fs::path& path)
      : bytes_(std::move(bytes)), path_(path) {}

  std::string magic() {
    if (bytes_.size() < 2 || bytes_[0] != 'P') fail(path_, "not a PNM file");
    pos_ = 2;
    return std::string(bytes_.begin(), bytes_.begin() + 2);
  }

  unsigned long header_number() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) fail(path_, "malformed PNM header");
    unsigned long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > (1UL << 31)) fail(path_, "PNM header value out of range");
    }
    return v;
  }

  // Exactly one whitespace byte separates the header from binary samples.
  void end_header() { ++pos_; }

  unsigned binary_sample(bool wide) {
    const std::size_t need = wide ? 2 : 1;
    if (pos_ + need > bytes_.size()) fail(path_, "truncated PNM pixel data");
    unsigned v = bytes_[pos_++];
    if (wide) v = (v << 8) | bytes_[pos_++];
    return v;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::vector<unsigned char> bytes_;
  const fs::path& path_;
  std::size_t pos_ = 0;
};

RawImage read_pnm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  PnmReader reader(std::move(bytes), path);
  const std::string magic = reader.magic();
  const bool ascii = magic == "P2" || magic == "P3";
  const bool color = magic == "P3" || magic == "P6";
  if (magic != "P2" && magic != "P3" && magic != "P5" && magic != "P6") {
    fail(path, "unsupported PNM variant " + magic);
  }
  RawImage raw;
  raw.width = reader.header_number();
  raw.height = reader.header_number();
  const unsigned long maxval = reader.header_number();
  if (maxval == 0 || maxval > 65535) {
    fail(path, "unsupported bit depth (maxval " + std::to_string(maxval) + ", at most 16 bits)");
  }
  if (raw.width == 0 || raw.height == 0) fail(path, "empty image");
  raw.components = color ? 3 : 1;
  const std::size_t count = raw.width * raw.height * raw.components;
  raw.samples.resize(count);
  if (ascii) {
    for (auto& s : raw.samples) s = static_cast<double>(reader.header_number());
  } else {
    reader.end_header();
    const bool wide = maxval > 255;
    for (auto& s : raw.samples) s = reader.binary_sample(wide);
  }
  for (double s : raw.samples) {
    if (s > static_cast<double>(maxval)) fail(path, "sample exceeds maxval");
  }
  return raw;
}

// --- PNG ------------------------------------------------------------------

RawImage read_png(const fs::path& path) {
  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.c_str(), "rb"), &std::fclose);
  if (!fp) fail(path, "cannot open file");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) fail(path, "libpng initialization failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    fail(path, "libpng initialization failed");
  }
  RawImage raw;
  std::vector<png_bytep> rows;
  std::vector<unsigned char> buffer;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "corrupt or unreadable PNG");
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  const int color_type = png_get_color_type(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  raw.width = png_get_image_width(png, info);
  raw.height = png_get_image_height(png, info);
  const int depth = png_get_bit_depth(png, info);
  const int channels = png_get_channels(png, info);
  raw.components = static_cast<std::size_t>(channels);
  const std::size_t row_bytes = png_get_rowbytes(png, info);
  buffer.resize(row_bytes * raw.height);
  rows.resize(raw.height);
  for (std::size_t r = 0; r < raw.height; ++r) rows[r] = buffer.data() + r * row_bytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  if (channels != 1 && channels != 3) fail(path, "unsupported PNG channel layout");
  if (depth != 8 && depth != 16) fail(path, "unsupported PNG bit depth");
  const std::size_t count = raw.width * raw.height * raw.components;
  raw.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    raw.samples[i] = depth == 16 ? (buffer[2 * i] << 8 | buffer[2 * i + 1]) : buffer[i];
  }
  return raw;
}

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

bool is_image_extension(const std::string& ext) {
  return ext == ".png" || ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

void write_sample(std::ofstream& out, double v, unsigned maxval, const fs::path& path) {
  const double r = std::round(v);
  if (r < 0.0 || r > static_cast<double>(maxval)) fail(path, "value out of range for maxval");
  const auto s = static_cast<unsigned>(r);
  if (maxval > 255) out.put(static_cast<char>(s >> 8));
  out.put(static_cast<char>(s & 0xff));
}

}  // namespace

MultiChannelImage load_image(const fs::path& path) {
  if (!fs::is_regular_file(path)) fail(path, "no such file");
  std::ifstream probe(path, std::ios::binary);
  unsigned char sig[8] = {};
  probe.read(reinterpret_cast<char*>(sig), 8);
  probe.close();
  if (png_sig_cmp(sig, 0, 8) == 0) return to_channels(read_png(path), path);
  if (sig[0] == 'P') return to_channels(read_pnm(path), path);
  fail(path, "unrecognized image format");
}

void save_pgm(const fs::path& path, const ScalarField& field, unsigned maxval) {
  if (maxval == 0 || maxval > 65535) fail(path, "maxval must be in [1, 65535]");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << "P5\n" << field.width() << ' ' << field.height() << '\n' << maxval << '\n';
  for (double v : field.values()) write_sample(out, v, maxval, path);
  if (!out) fail(path, "write failed");
}

void save_ppm(const fs::path& path, const MultiChannelImage& image, unsigned maxval) {
  if (maxval == 0 || maxval > 65535) fail(path, "maxval must be in [1, 65535]");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << "P6\n" << image.width() << ' ' << image.height() << '\n' << maxval << '\n';
  const auto& r = image.channel(Channel::Red);
  const auto& g = image.channel(Channel::Green);
  const auto& b = image.channel(Channel::Blue);
  for (std::size_t i = 0; i < r.size(); ++i) {
    write_sample(out, r[i], maxval, path);
    write_sample(out, g[i], maxval, path);
    write_sample(out, b[i], maxval, path);
  }
  if (!out) fail(path, "write failed");
}

DatasetListing list_dataset(const fs::path& root) {
  if (!fs::is_directory(root)) fail(root, "dataset root is not a directory");
  DatasetListing listing;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) listing.class_names.push_back(entry.path().filename().string());
  }
  std::sort(listing.class_names.begin(), listing.class_names.end());
  if (listing.class_names.empty()) fail(root, "no class directories");
  for (std::size_t label = 0; label < listing.class_names.size(); ++label) {
    const auto& name = listing.class_names[label];
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(root / name)) {
      if (entry.is_regular_file() && is_image_extension(lower_extension(entry.path()))) {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (auto& f : files) {
      listing.entries.push_back({f, name + "/" + f.filename().string(), static_cast<int>(label)});
    }
  }
  return listing;
}

}  // namespace geotop
