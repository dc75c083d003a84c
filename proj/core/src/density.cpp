#include "gazedoc/density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gazedoc/error.hpp"

namespace gazedoc {
namespace {

std::vector<double> gaussian_half_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(radius + 1);
  for (int d = 0; d <= radius; ++d) {
    k[d] = std::exp(-0.5 * (d * d) / (sigma * sigma));
  }
  return k;
}

// Scatters each entry of a strided line over its in-bounds kernel footprint.
// `norms[i]` holds the in-bounds kernel mass for source position i.
void scatter_line(const double* src, double* dst, int n, std::ptrdiff_t stride,
                  const std::vector<double>& kernel,
                  const std::vector<double>& norms) {
  const int radius = static_cast<int>(kernel.size()) - 1;
  for (int i = 0; i < n; ++i) {
    const double v = src[i * stride];
    if (v == 0.0) continue;
    const double scale = v / norms[i];
    const int lo = std::max(0, i - radius);
    const int hi = std::min(n - 1, i + radius);
    for (int j = lo; j <= hi; ++j) {
      dst[j * stride] += scale * kernel[std::abs(j - i)];
    }
  }
}

std::vector<double> footprint_norms(int n, const std::vector<double>& kernel) {
  const int radius = static_cast<int>(kernel.size()) - 1;
  std::vector<double> norms(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - radius);
    const int hi = std::min(n - 1, i + radius);
    double s = 0.0;
    for (int j = lo; j <= hi; ++j) s += kernel[std::abs(j - i)];
    norms[i] = s;
  }
  return norms;
}

DensityMap rescale(DensityMap map, MapScale scale) {
  if (scale == MapScale::kRaw) return map;
  return normalized_or_zero(std::move(map));
}

}  // namespace

void check_fixation_bounds(std::span<const Fixation> fixations, int width,
                           int height) {
  for (std::size_t i = 0; i < fixations.size(); ++i) {
    const Fixation& f = fixations[i];
    if (!(f.x >= 0.0 && f.x < width && f.y >= 0.0 && f.y < height)) {
      throw ValidationError("fixation " + std::to_string(i) + " at (" +
                            std::to_string(f.x) + ", " + std::to_string(f.y) +
                            ") is outside the " + std::to_string(width) + "x" +
                            std::to_string(height) + " image");
    }
  }
}

int pixel_column(double x, int width) {
  return std::clamp(static_cast<int>(std::floor(x + 0.5)), 0, width - 1);
}

int pixel_row(double y, int height) {
  return std::clamp(static_cast<int>(std::floor(y + 0.5)), 0, height - 1);
}

Scanpath truncated(const Scanpath& scanpath, int count) {
  Scanpath out = scanpath;
  if (count > 0 && static_cast<int>(out.fixations.size()) > count) {
    out.fixations.resize(count);
  }
  return out;
}

DensityMap gaussian_blur(const DensityMap& map, double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ValidationError("blur sigma must be finite and >= 0");
  }
  if (sigma == 0.0 || map.empty()) return map;
  const int w = map.width();
  const int h = map.height();
  const auto kernel = gaussian_half_kernel(sigma);
  const auto row_norms = footprint_norms(w, kernel);
  const auto col_norms = footprint_norms(h, kernel);

  std::vector<double> tmp(map.size(), 0.0);
  const double* src = map.values().data();
  for (int y = 0; y < h; ++y) {
    scatter_line(src + static_cast<std::ptrdiff_t>(y) * w,
                 tmp.data() + static_cast<std::ptrdiff_t>(y) * w, w, 1, kernel,
                 row_norms);
  }
  std::vector<double> out(map.size(), 0.0);
  for (int x = 0; x < w; ++x) {
    scatter_line(tmp.data() + x, out.data() + x, h, w, kernel, col_norms);
  }
  return DensityMap(w, h, std::move(out));
}

DensityMap splat_fixations(std::span<const Fixation> fixations, int width,
                           int height, bool weight_by_duration) {
  check_fixation_bounds(fixations, width, height);
  std::vector<double> values(static_cast<std::size_t>(width) * height, 0.0);
  for (const Fixation& f : fixations) {
    double weight = 1.0;
    if (weight_by_duration) {
      if (!(f.duration_ms >= 0.0) || !std::isfinite(f.duration_ms)) {
        throw ValidationError("fixation " + std::to_string(f.index) +
                              " has a negative or non-finite duration");
      }
      weight = f.duration_ms;
    }
    const int x0 = static_cast<int>(std::floor(f.x));
    const int y0 = static_cast<int>(std::floor(f.y));
    const double fx = f.x - x0;
    const double fy = f.y - y0;
    const int x1 = std::min(x0 + 1, width - 1);
    const int y1 = std::min(y0 + 1, height - 1);
    auto deposit = [&](int x, int y, double w) {
      values[static_cast<std::size_t>(y) * width + x] += weight * w;
    };
    deposit(x0, y0, (1.0 - fx) * (1.0 - fy));
    deposit(x1, y0, fx * (1.0 - fy));
    deposit(x0, y1, (1.0 - fx) * fy);
    deposit(x1, y1, fx * fy);
  }
  return DensityMap(width, height, std::move(values));
}

DensityMap build_fdm_raw(std::span<const Fixation> fixations, int width,
                         int height, double sigma) {
  if (fixations.empty()) throw ValidationError("no fixations");
  return gaussian_blur(splat_fixations(fixations, width, height), sigma);
}

DensityMap build_fdm(std::span<const Fixation> fixations, int width,
                     int height, double sigma) {
  return normalized(build_fdm_raw(fixations, width, height, sigma));
}

DensityMap component_fdm(const DensityMap& gt_fdm, const Mask& mask,
                         double sigma, MapScale scale) {
  return rescale(gaussian_blur(apply_mask(gt_fdm, mask), sigma), scale);
}

DensityMap residual_image_fdm(const DensityMap& whole_fdm,
                              std::span<const Mask> component_masks,
                              double sigma, MapScale scale) {
  const Mask covered =
      mask_union(component_masks, whole_fdm.width(), whole_fdm.height());
  return component_fdm(whole_fdm, covered.complement(), sigma, scale);
}

DensityMap dwell_map(std::span<const Fixation> fixations, int width,
                     int height, double sigma) {
  if (fixations.empty()) throw ValidationError("no fixations");
  DensityMap impulses = splat_fixations(fixations, width, height, true);
  if (!(impulses.sum() > 0.0)) throw ValidationError("degenerate dwell data");
  return gaussian_blur(impulses, sigma);
}

double fdm_entropy(const DensityMap& map) {
  const double total = map.sum();
  if (!(total > 0.0)) throw ValidationError("entropy of a zero map is undefined");
  double h = 0.0;
  for (double v : map.values()) {
    if (v > 0.0) {
      const double p = v / total;
      h -= p * std::log2(p);
    }
  }
  return std::max(h, 0.0);
}

double total_variation(const DensityMap& map) {
  const int w = map.width();
  const int h = map.height();
  double tv = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (x + 1 < w) tv += std::abs(map(x + 1, y) - map(x, y));
      if (y + 1 < h) tv += std::abs(map(x, y + 1) - map(x, y));
    }
  }
  return tv;
}

std::vector<std::optional<double>> fixation_dwell_difference(
    const DensityMap& fdm, const DensityMap& dwell, std::span<const Mask> masks) {
  if (!fdm.same_shape(dwell)) {
    throw ValidationError("fixation and dwell maps differ in size");
  }
  std::vector<std::optional<double>> out;
  out.reserve(masks.size());
  const auto a = fdm.values();
  const auto b = dwell.values();
  for (const Mask& m : masks) {
    if (!m.same_shape(fdm)) {
      throw ValidationError("component mask does not match the map size");
    }
    const auto bits = m.bits();
    std::size_t area = 0;
    double total = 0.0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (!bits[i]) continue;
      ++area;
      total += std::abs(a[i] - b[i]);
    }
    if (area == 0) {
      out.emplace_back(std::nullopt);
    } else {
      out.emplace_back(total / static_cast<double>(area));
    }
  }
  return out;
}

std::vector<std::optional<double>> normalize_present(
    std::vector<std::optional<double>> values) {
  double total = 0.0;
  for (const auto& v : values) {
    if (v) total += *v;
  }
  if (total > 0.0) {
    for (auto& v : values) {
      if (v) *v /= total;
    }
  }
  return values;
}

}  // namespace gazedoc
