#include "gazedoc/io/render.hpp"

#include <gtest/gtest.h>

#include "gazedoc/error.hpp"
#include "gazedoc/io/raster.hpp"
#include "gazedoc/rng.hpp"
#include "oracles.hpp"

using namespace gazedoc;
using namespace gazedoc::io;

namespace {

RgbImage gray_image(int w, int h) {
  RgbImage img{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h * 3, 128)};
  return img;
}

}  // namespace

TEST(Render, AlphaZeroReturnsInput) {
  Rng rng(431);
  RgbImage img = gray_image(40, 30);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(uniform_index(rng, 256));
  RenderSpec spec;
  spec.alpha = 0.0;
  EXPECT_EQ(render_heatmap(img, oracle::random_map(rng, 20, 15), spec).pixels, img.pixels);
}

TEST(Render, HeatmapChangesPixelsAndIsDeterministic) {
  Rng rng(432);
  const RgbImage img = gray_image(40, 30);
  const DensityMap m = oracle::random_map(rng, 40, 30);
  for (const char* cmap : {"jet", "inferno", "viridis", "hot", "turbo"}) {
    RenderSpec spec;
    spec.colormap = cmap;
    const RgbImage a = render_heatmap(img, m, spec);
    EXPECT_EQ(encode_rgb_png(a), encode_rgb_png(render_heatmap(img, m, spec)));
    EXPECT_NE(a.pixels, img.pixels);
  }
}

TEST(Render, SevenMarkers) {
  Rng rng(433);
  Scanpath s = oracle::random_scanpath(rng, 7, 200, 100);
  s.fixations[0].x = 250.0;
  const auto markers = scanpath_markers(s, 200, 100);
  ASSERT_EQ(markers.size(), 7u);
  EXPECT_EQ(markers[0].x, 199);
  for (int i = 0; i < 7; ++i) {
    EXPECT_EQ(markers[i].number, i + 1);
    if (i > 0) EXPECT_EQ(markers[i].x, pixel_column(s.fixations[i].x, 200));
  }
  RenderSpec spec;
  const RgbImage out = render_scanpath(gray_image(200, 100), s, spec);
  // Without numbers the marker centers keep the marker color.
  spec.numbering = false;
  const RgbImage plain = render_scanpath(gray_image(200, 100), s, spec);
  EXPECT_NE(plain.pixels, out.pixels);
  bool colored = false;
  for (const auto& mk : markers) {
    const std::size_t j = (static_cast<std::size_t>(mk.y) * 200 + mk.x) * 3;
    colored = colored || (plain.pixels[j] == kMarkerRgb[0] && plain.pixels[j + 1] == kMarkerRgb[1] &&
                          plain.pixels[j + 2] == kMarkerRgb[2]);
  }
  EXPECT_TRUE(colored);
  EXPECT_EQ(encode_rgb_png(out), encode_rgb_png(render_scanpath(gray_image(200, 100), s, RenderSpec{})));
}

TEST(Render, SpecValidation) {
  RenderSpec s;
  EXPECT_NO_THROW(validate(s));
  s.alpha = 1.5;
  EXPECT_THROW(validate(s), ValidationError);
  s = RenderSpec{};
  s.colormap = "rainbow";
  EXPECT_THROW(validate(s), ValidationError);
  s = RenderSpec{};
  s.marker_radius = 0;
  EXPECT_THROW(validate(s), ValidationError);
}
