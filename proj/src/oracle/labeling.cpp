#include <algorithm>
#include <queue>

#include "geotop/oracle.hpp"

namespace geotop::oracle {

Labeling label_components(const BinaryImage& image, Connectivity connectivity, bool want) {
  const std::size_t w = image.width, h = image.height;
  Labeling out;
  out.labels.assign(w * h, -1);
  std::queue<std::size_t> queue;
  for (std::size_t start = 0; start < w * h; ++start) {
    if ((image.mask[start] != 0) != want || out.labels[start] != -1) continue;
    const int id = out.count++;
    out.labels[start] = id;
    queue.push(start);
    while (!queue.empty()) {
      const std::size_t p = queue.front();
      queue.pop();
      const long r = static_cast<long>(p / w), c = static_cast<long>(p % w);
      for (long dr = -1; dr <= 1; ++dr) {
        for (long dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          if (connectivity == Connectivity::Four && dr != 0 && dc != 0) continue;
          const long rr = r + dr, cc = c + dc;
          if (rr < 0 || cc < 0 || rr >= static_cast<long>(h) || cc >= static_cast<long>(w)) continue;
          const std::size_t q = static_cast<std::size_t>(rr) * w + static_cast<std::size_t>(cc);
          if ((image.mask[q] != 0) != want || out.labels[q] != -1) continue;
          out.labels[q] = id;
          queue.push(q);
        }
      }
    }
  }
  return out;
}

Labeling label_holes(const BinaryImage& image) {
  const Labeling bg = label_components(image, Connectivity::Four, false);
  std::vector<bool> touches(static_cast<std::size_t>(bg.count), false);
  const std::size_t w = image.width, h = image.height;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const int l = bg.labels[r * w + c];
      if (l >= 0 && (r == 0 || c == 0 || r + 1 == h || c + 1 == w)) touches[l] = true;
    }
  }
  std::vector<int> remap(static_cast<std::size_t>(bg.count), -1);
  Labeling out;
  for (int l = 0; l < bg.count; ++l) {
    if (!touches[l]) remap[l] = out.count++;
  }
  out.labels.resize(bg.labels.size());
  for (std::size_t i = 0; i < bg.labels.size(); ++i) {
    out.labels[i] = bg.labels[i] < 0 ? -1 : remap[bg.labels[i]];
  }
  return out;
}

long components_minus_holes(const BinaryImage& image) {
  return static_cast<long>(label_components(image, Connectivity::Eight).count) -
         static_cast<long>(label_holes(image).count);
}

std::size_t boundary_edges(std::size_t width, std::size_t height, const std::vector<std::size_t>& pixels) {
  std::vector<std::uint8_t> in(width * height, 0);
  for (auto p : pixels) in[p] = 1;
  std::size_t edges = 0;
  for (auto p : pixels) {
    const std::size_t r = p / width, c = p % width;
    edges += (r == 0 || !in[p - width]);
    edges += (r + 1 == height || !in[p + width]);
    edges += (c == 0 || !in[p - 1]);
    edges += (c + 1 == width || !in[p + 1]);
  }
  return edges;
}

std::vector<Bar> sorted_bars(const PersistenceDiagram& diagram) {
  std::vector<Bar> bars = diagram.bars;
  std::sort(bars.begin(), bars.end(), [](const Bar& a, const Bar& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    if (a.birth != b.birth) return a.birth < b.birth;
    if (a.death != b.death) return a.death < b.death;
    return a.essential < b.essential;
  });
  return bars;
}

}  // namespace geotop::oracle
