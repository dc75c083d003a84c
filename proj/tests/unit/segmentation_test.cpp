#include "gazedoc/segmentation.hpp"

#include <gtest/gtest.h>

#include "gazedoc/error.hpp"
#include "gazedoc/rng.hpp"

using namespace gazedoc;

TEST(SegStats, AllBackground) {
  const SegStats s = seg_stats(SegmentationMap(7, 5));
  EXPECT_EQ(s.r_img, 0.0);
  EXPECT_EQ(s.r_text, 0.0);
  EXPECT_EQ(s.r_banner, 0.0);
  EXPECT_EQ(s.r_bg, 1.0);
}

TEST(SegStats, FourLabelQuarters) {
  const SegmentationMap seg(2, 2, std::vector<std::uint8_t>{1, 2, 3, 0});
  const SegStats s = seg_stats(seg);
  EXPECT_EQ(s.r_img, 0.25);
  EXPECT_EQ(s.r_text, 0.25);
  EXPECT_EQ(s.r_banner, 0.25);
  EXPECT_EQ(s.r_bg, 0.25);
}

TEST(SegStats, MatchesPixelCounts) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint8_t> labels(64);
    for (auto& l : labels) l = static_cast<std::uint8_t>(uniform_index(rng, kNumLabels));
    const SegmentationMap seg(8, 8, labels);
    std::array<int, 5> count{};
    for (int y = 0; y < 8; ++y)
      for (int x = 0; x < 8; ++x) ++count[static_cast<int>(seg(x, y))];
    const SegStats s = seg_stats(seg);
    EXPECT_EQ(s.r_img, count[1] / 64.0);
    EXPECT_EQ(s.r_text, count[2] / 64.0);
    EXPECT_EQ(s.r_banner, count[3] / 64.0);
    EXPECT_EQ(s.r_bg, count[0] / 64.0);
    EXPECT_NEAR(s.r_img + s.r_text + s.r_banner + s.r_bg + count[4] / 64.0, 1.0, 1e-9);
  }
}

TEST(SegStats, ZeroAreaRejected) { EXPECT_THROW(seg_stats(SegmentationMap()), ValidationError); }

TEST(SegmentationMap, RejectsUnknownLabel) {
  EXPECT_THROW(SegmentationMap(2, 1, std::vector<std::uint8_t>{0, 7}), ValidationError);
  EXPECT_THROW(SegmentationMap(2, 2, std::vector<std::uint8_t>{0, 1}), ValidationError);
}

TEST(SegmentationMap, PaintPrecedence) {
  SegmentationMap seg(10, 10);
  seg.paint_rect(0, 0, 6, 6, Label::kBanner);
  seg.paint_rect(2, 2, 8, 8, Label::kImage);
  seg.paint_rect(4, 4, 10, 10, Label::kText);
  seg.paint_rect(3, 3, 5, 5, Label::kLogo);
  seg.paint_rect(0, 0, 10, 10, Label::kBanner);
  EXPECT_EQ(seg(0, 0), Label::kBanner);
  EXPECT_EQ(seg(2, 2), Label::kImage);
  EXPECT_EQ(seg(3, 3), Label::kLogo);
  EXPECT_EQ(seg(4, 4), Label::kLogo);
  EXPECT_EQ(seg(6, 6), Label::kText);
  EXPECT_EQ(seg(9, 9), Label::kText);
  EXPECT_EQ(seg(9, 0), Label::kBanner);
  EXPECT_GT(label_precedence(Label::kLogo), label_precedence(Label::kText));
  EXPECT_GT(label_precedence(Label::kText), label_precedence(Label::kImage));
  EXPECT_GT(label_precedence(Label::kImage), label_precedence(Label::kBanner));
  EXPECT_GT(label_precedence(Label::kBanner), label_precedence(Label::kBackground));
}

TEST(ComponentMasks, ImageIsResidual) {
  SegmentationMap seg(4, 1, std::vector<std::uint8_t>{0, 1, 2, 4});
  Mask face(4, 1, false);
  face.set(1, 0, true);
  seg.set_face_mask(face);
  const auto m = component_masks(seg);
  EXPECT_TRUE(m[0](1, 0));
  EXPECT_EQ(m[0].count(), 1u);
  EXPECT_TRUE(m[1](2, 0));
  EXPECT_TRUE(m[2](3, 0));
  EXPECT_EQ(m[3].count(), 0u);
  // Background and the non-face image pixel remain; the face pixel does not.
  EXPECT_TRUE(m[4](0, 0));
  EXPECT_FALSE(m[4](1, 0));
  EXPECT_EQ(m[4].count(), 1u);
}

TEST(ComponentNames, RoundTrip) {
  for (Component c : kAllComponents) EXPECT_EQ(parse_component(component_name(c)), c);
  EXPECT_FALSE(parse_component("sidebar").has_value());
}
