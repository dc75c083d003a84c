#ifndef GAZEDOC_DENSITY_MAP_HPP_
#define GAZEDOC_DENSITY_MAP_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gazedoc {

// Non-negative scalar field over image pixels, stored row-major. Used for
// fixation-density maps, dwell maps, priors and predicted saliency.
class DensityMap {
 public:
  DensityMap() = default;
  DensityMap(int width, int height, double fill = 0.0);
  // Throws ValidationError if the value count does not match or any value is
  // negative or non-finite.
  DensityMap(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double operator()(int x, int y) const {
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }
  double& at(int x, int y) {
    normalized_ = false;
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<const double> values() const { return values_; }
  // Mutable access clears the normalized flag.
  std::span<double> mutable_values() {
    normalized_ = false;
    return values_;
  }

  // True when produced by normalized(); the sum is then 1 within 1e-9.
  bool is_normalized() const { return normalized_; }

  double sum() const;
  double max() const;
  bool same_shape(const DensityMap& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend DensityMap normalized(DensityMap map);
  friend DensityMap scaled(DensityMap map, double factor);

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
  bool normalized_ = false;
};

// Returns map / sum(map), flagged normalized. Throws ValidationError on a
// zero-mass map.
DensityMap normalized(DensityMap map);
// Like normalized(), but a zero map is returned unchanged.
DensityMap normalized_or_zero(DensityMap map);
DensityMap scaled(DensityMap map, double factor);

// Binary pixel mask, row-major, one byte per pixel (0 or 1).
class Mask {
 public:
  Mask() = default;
  Mask(int width, int height, bool fill = false);
  Mask(int width, int height, std::vector<std::uint8_t> bits);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return bits_.size(); }

  bool operator()(int x, int y) const {
    return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  void set(int x, int y, bool on) {
    bits_[static_cast<std::size_t>(y) * width_ + x] = on ? 1 : 0;
  }
  std::span<const std::uint8_t> bits() const { return bits_; }

  std::size_t count() const;
  Mask complement() const;
  bool same_shape(const DensityMap& map) const {
    return width_ == map.width() && height_ == map.height();
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

Mask mask_union(std::span<const Mask> masks, int width, int height);
// Pixelwise product; throws ValidationError on shape mismatch.
DensityMap apply_mask(const DensityMap& map, const Mask& mask);

}  // namespace gazedoc

#endif  // GAZEDOC_DENSITY_MAP_HPP_
