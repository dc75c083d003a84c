#include "gazedoc/density_map.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gazedoc/error.hpp"

namespace gazedoc {
namespace {

void check_dims(int width, int height) {
  if (width < 0 || height < 0) {
    throw ValidationError("map dimensions must be non-negative, got " +
                          std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

DensityMap::DensityMap(int width, int height, double fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  if (!(fill >= 0.0) || !std::isfinite(fill)) {
    throw ValidationError("density fill value must be finite and >= 0");
  }
  values_.assign(static_cast<std::size_t>(width) * height, fill);
}

DensityMap::DensityMap(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  check_dims(width, height);
  if (values_.size() != static_cast<std::size_t>(width) * height) {
    throw ValidationError("density map expects " +
                          std::to_string(static_cast<std::size_t>(width) * height) +
                          " values, got " + std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0) || !std::isfinite(values_[i])) {
      throw ValidationError("density value at index " + std::to_string(i) +
                            " is negative or non-finite");
    }
  }
}

double DensityMap::sum() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

double DensityMap::max() const {
  if (values_.empty()) return 0.0;
  return *std::max_element(values_.begin(), values_.end());
}

DensityMap normalized(DensityMap map) {
  const double total = map.sum();
  if (!(total > 0.0)) throw ValidationError("cannot normalize a zero-mass map");
  for (double& v : map.values_) v /= total;
  map.normalized_ = true;
  return map;
}

DensityMap normalized_or_zero(DensityMap map) {
  if (!(map.sum() > 0.0)) return map;
  return normalized(std::move(map));
}

DensityMap scaled(DensityMap map, double factor) {
  if (!(factor >= 0.0)) throw ValidationError("scale factor must be >= 0");
  for (double& v : map.values_) v *= factor;
  map.normalized_ = false;
  return map;
}

Mask::Mask(int width, int height, bool fill) : width_(width), height_(height) {
  check_dims(width, height);
  bits_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

Mask::Mask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  check_dims(width, height);
  if (bits_.size() != static_cast<std::size_t>(width) * height) {
    throw ValidationError("mask size does not match its dimensions");
  }
  for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t Mask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

Mask Mask::complement() const {
  Mask out(width_, height_);
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] ? 0 : 1;
  return out;
}

Mask mask_union(std::span<const Mask> masks, int width, int height) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(width) * height, 0);
  for (const Mask& m : masks) {
    if (m.width() != width || m.height() != height) {
      throw ValidationError("mask dimensions " + std::to_string(m.width()) + "x" +
                            std::to_string(m.height()) + " do not match " +
                            std::to_string(width) + "x" + std::to_string(height));
    }
    const auto src = m.bits();
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] |= src[i];
  }
  return Mask(width, height, std::move(bits));
}

DensityMap apply_mask(const DensityMap& map, const Mask& mask) {
  if (!mask.same_shape(map)) {
    throw ValidationError("mask " + std::to_string(mask.width()) + "x" +
                          std::to_string(mask.height()) + " does not match map " +
                          std::to_string(map.width()) + "x" +
                          std::to_string(map.height()));
  }
  std::vector<double> out(map.values().begin(), map.values().end());
  const auto bits = mask.bits();
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!bits[i]) out[i] = 0.0;
  }
  return DensityMap(map.width(), map.height(), std::move(out));
}

}  // namespace gazedoc
