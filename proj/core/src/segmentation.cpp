#include "gazedoc/segmentation.hpp"

#include <algorithm>
#include <string>

#include "gazedoc/error.hpp"

namespace gazedoc {

std::string_view component_name(Component c) {
  switch (c) {
    case Component::kFace: return "face";
    case Component::kText: return "text";
    case Component::kLogo: return "logo";
    case Component::kBanner: return "banner";
    case Component::kImage: return "image";
  }
  return "unknown";
}

std::optional<Component> parse_component(std::string_view name) {
  for (Component c : kAllComponents) {
    if (component_name(c) == name) return c;
  }
  return std::nullopt;
}

int label_precedence(Label label) {
  switch (label) {
    case Label::kLogo: return 4;
    case Label::kText: return 3;
    case Label::kImage: return 2;
    case Label::kBanner: return 1;
    case Label::kBackground: return 0;
  }
  return 0;
}

SegmentationMap::SegmentationMap(int width, int height, Label fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) throw ValidationError("negative segmentation size");
  labels_.assign(static_cast<std::size_t>(width) * height,
                 static_cast<std::uint8_t>(fill));
}

SegmentationMap::SegmentationMap(int width, int height,
                                 std::vector<std::uint8_t> labels,
                                 std::optional<Mask> face_mask)
    : width_(width), height_(height), labels_(std::move(labels)) {
  if (width < 0 || height < 0) throw ValidationError("negative segmentation size");
  if (labels_.size() != static_cast<std::size_t>(width) * height) {
    throw ValidationError("segmentation label count does not match its size");
  }
  std::vector<int> bad;
  for (std::uint8_t v : labels_) {
    if (v >= kNumLabels && std::find(bad.begin(), bad.end(), v) == bad.end()) {
      bad.push_back(v);
    }
  }
  if (!bad.empty()) {
    std::sort(bad.begin(), bad.end());
    std::string list;
    for (int v : bad) list += (list.empty() ? "" : ", ") + std::to_string(v);
    throw ValidationError("unknown segmentation label value(s): " + list);
  }
  if (face_mask) set_face_mask(std::move(*face_mask));
}

void SegmentationMap::paint_rect(int x0, int y0, int x1, int y1, Label label) {
  x0 = std::max(x0, 0);
  y0 = std::max(y0, 0);
  x1 = std::min(x1, width_);
  y1 = std::min(y1, height_);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      if (label_precedence(label) >= label_precedence((*this)(x, y))) set(x, y, label);
    }
  }
}

void SegmentationMap::set_face_mask(Mask mask) {
  if (mask.width() != width_ || mask.height() != height_) {
    throw ValidationError("face mask size does not match the segmentation");
  }
  face_mask_ = std::move(mask);
}

Mask SegmentationMap::label_mask(Label label) const {
  std::vector<std::uint8_t> bits(labels_.size());
  const auto code = static_cast<std::uint8_t>(label);
  for (std::size_t i = 0; i < labels_.size(); ++i) bits[i] = labels_[i] == code;
  return Mask(width_, height_, std::move(bits));
}

Mask component_mask(const SegmentationMap& seg, Component c) {
  switch (c) {
    case Component::kFace:
      return seg.face_mask() ? *seg.face_mask() : Mask(seg.width(), seg.height());
    case Component::kText: return seg.label_mask(Label::kText);
    case Component::kLogo: return seg.label_mask(Label::kLogo);
    case Component::kBanner: return seg.label_mask(Label::kBanner);
    case Component::kImage: {
      const std::array<Mask, 4> others = {
          component_mask(seg, Component::kFace), seg.label_mask(Label::kText),
          seg.label_mask(Label::kLogo), seg.label_mask(Label::kBanner)};
      return mask_union(others, seg.width(), seg.height()).complement();
    }
  }
  throw ValidationError("unknown component");
}

std::array<Mask, kNumComponents> component_masks(const SegmentationMap& seg) {
  std::array<Mask, kNumComponents> out;
  for (Component c : kAllComponents) out[static_cast<int>(c)] = component_mask(seg, c);
  return out;
}

SegStats seg_stats(const SegmentationMap& seg) {
  if (seg.size() == 0) throw ValidationError("segmentation has zero area");
  std::array<std::size_t, kNumLabels> counts{};
  for (std::uint8_t v : seg.labels()) ++counts[v];
  const double n = static_cast<double>(seg.size());
  SegStats s;
  s.r_img = counts[static_cast<int>(Label::kImage)] / n;
  s.r_text = counts[static_cast<int>(Label::kText)] / n;
  s.r_banner = counts[static_cast<int>(Label::kBanner)] / n;
  s.r_bg = counts[static_cast<int>(Label::kBackground)] / n;
  return s;
}

}  // namespace gazedoc
