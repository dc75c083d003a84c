#ifndef GAZEDOC_SEGMENTATION_HPP_
#define GAZEDOC_SEGMENTATION_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "gazedoc/density_map.hpp"

namespace gazedoc {

// Stored pixel labels. Values match the on-disk segmentation PNG encoding.
enum class Label : std::uint8_t {
  kBackground = 0,
  kImage = 1,
  kText = 2,
  kBanner = 3,
  kLogo = 4,
};
inline constexpr int kNumLabels = 5;

// Document components in belief-channel order.
enum class Component : int { kFace = 0, kText = 1, kLogo = 2, kBanner = 3, kImage = 4 };
inline constexpr int kNumComponents = 5;
inline constexpr std::array<Component, kNumComponents> kAllComponents = {
    Component::kFace, Component::kText, Component::kLogo, Component::kBanner,
    Component::kImage};

std::string_view component_name(Component c);
std::optional<Component> parse_component(std::string_view name);

// When source rectangles overlap, the winning label is the one listed first:
// logo, text, image, banner, background.
int label_precedence(Label label);

class SegmentationMap {
 public:
  SegmentationMap() = default;
  SegmentationMap(int width, int height, Label fill = Label::kBackground);
  // Throws ValidationError on a size mismatch or a label value above 4.
  SegmentationMap(int width, int height, std::vector<std::uint8_t> labels,
                  std::optional<Mask> face_mask = std::nullopt);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return labels_.size(); }

  Label operator()(int x, int y) const {
    return static_cast<Label>(labels_[static_cast<std::size_t>(y) * width_ + x]);
  }
  void set(int x, int y, Label label) {
    labels_[static_cast<std::size_t>(y) * width_ + x] =
        static_cast<std::uint8_t>(label);
  }
  // Writes `label` over the rectangle unless the current label wins by
  // precedence. The rectangle is clipped to the map.
  void paint_rect(int x0, int y0, int x1, int y1, Label label);

  std::span<const std::uint8_t> labels() const { return labels_; }
  const std::optional<Mask>& face_mask() const { return face_mask_; }
  void set_face_mask(Mask mask);

  Mask label_mask(Label label) const;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> labels_;
  std::optional<Mask> face_mask_;
};

// Component masks. Face comes from the face mask (empty when none); text,
// logo and banner from their labels; image is the residual region not
// covered by any of the other four components.
Mask component_mask(const SegmentationMap& seg, Component c);
std::array<Mask, kNumComponents> component_masks(const SegmentationMap& seg);

// Layout statistics: fraction of pixels labeled image, text, banner and
// background. Logo pixels are not part of any of the four ratios.
struct SegStats {
  double r_img = 0.0;
  double r_text = 0.0;
  double r_banner = 0.0;
  double r_bg = 0.0;

  static constexpr int kDim = 4;
  std::array<double, kDim> as_array() const { return {r_img, r_text, r_banner, r_bg}; }
};

SegStats seg_stats(const SegmentationMap& seg);

}  // namespace gazedoc

#endif  // GAZEDOC_SEGMENTATION_HPP_
