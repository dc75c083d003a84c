#include "gazedoc/resample.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gazedoc/error.hpp"

namespace gazedoc {
namespace {

struct Tap {
  int src;
  double weight;
};

// Coverage taps for mapping n_in cells onto n_out cells; the weights of each
// output cell sum to one.
std::vector<std::vector<Tap>> area_taps(int n_in, int n_out) {
  std::vector<std::vector<Tap>> taps(n_out);
  const double scale = static_cast<double>(n_in) / n_out;
  for (int j = 0; j < n_out; ++j) {
    const double lo = j * scale;
    const double hi = (j + 1) * scale;
    const int first = static_cast<int>(std::floor(lo));
    const int last = std::min(n_in - 1, static_cast<int>(std::ceil(hi)) - 1);
    for (int i = first; i <= last; ++i) {
      const double overlap = std::min(hi, i + 1.0) - std::max(lo, double(i));
      if (overlap > 0.0) taps[j].push_back({i, overlap / scale});
    }
  }
  return taps;
}

void check_target(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw ValidationError("resample target must be at least 1x1");
  }
}

}  // namespace

DensityMap resize_area(const DensityMap& map, int width, int height) {
  check_target(width, height);
  if (map.empty()) throw ValidationError("cannot resample an empty map");
  if (map.width() == width && map.height() == height) return map;
  const auto xt = area_taps(map.width(), width);
  const auto yt = area_taps(map.height(), height);
  std::vector<double> rows(static_cast<std::size_t>(width) * map.height(), 0.0);
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < width; ++x) {
      double s = 0.0;
      for (const Tap& t : xt[x]) s += t.weight * map(t.src, y);
      rows[static_cast<std::size_t>(y) * width + x] = s;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(width) * height, 0.0);
  for (int y = 0; y < height; ++y) {
    for (const Tap& t : yt[y]) {
      const double* src = rows.data() + static_cast<std::size_t>(t.src) * width;
      double* dst = out.data() + static_cast<std::size_t>(y) * width;
      for (int x = 0; x < width; ++x) dst[x] += t.weight * src[x];
    }
  }
  return DensityMap(width, height, std::move(out));
}

DensityMap resize_bilinear(const DensityMap& map, int width, int height) {
  check_target(width, height);
  if (map.empty()) throw ValidationError("cannot resample an empty map");
  if (map.width() == width && map.height() == height) return map;
  const double sx = static_cast<double>(map.width()) / width;
  const double sy = static_cast<double>(map.height()) / height;
  std::vector<double> out(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, map.height() - 1.0);
    const int y0 = static_cast<int>(std::floor(fy));
    const int y1 = std::min(y0 + 1, map.height() - 1);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, map.width() - 1.0);
      const int x0 = static_cast<int>(std::floor(fx));
      const int x1 = std::min(x0 + 1, map.width() - 1);
      const double wx = fx - x0;
      const double top = (1 - wx) * map(x0, y0) + wx * map(x1, y0);
      const double bottom = (1 - wx) * map(x0, y1) + wx * map(x1, y1);
      out[static_cast<std::size_t>(y) * width + x] =
          std::max(0.0, (1 - wy) * top + wy * bottom);
    }
  }
  return DensityMap(width, height, std::move(out));
}

DensityMap mask_coverage(const Mask& mask, int width, int height) {
  std::vector<double> v(mask.bits().begin(), mask.bits().end());
  return resize_area(DensityMap(mask.width(), mask.height(), std::move(v)),
                     width, height);
}

}  // namespace gazedoc
