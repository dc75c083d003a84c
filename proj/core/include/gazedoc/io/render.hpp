#ifndef GAZEDOC_IO_RENDER_HPP_
#define GAZEDOC_IO_RENDER_HPP_

#include <string>
#include <vector>

#include "gazedoc/density_map.hpp"
#include "gazedoc/scanpath.hpp"
#include "gazedoc/synthetic.hpp"

namespace gazedoc::io {

struct RenderSpec {
  // jet, inferno, viridis, hot or turbo.
  std::string colormap = "jet";
  double alpha = 0.5;
  int marker_radius = 12;
  bool numbering = true;
};

void validate(const RenderSpec& spec);

// Colormapped map (scaled by its maximum, bilinearly resized to the image
// when sizes differ) blended over the image with weight alpha.
RgbImage render_heatmap(const RgbImage& image, const DensityMap& map, const RenderSpec& spec);

struct Marker {
  int x = 0;
  int y = 0;
  int number = 0;
};

// One marker per fixation, at its rounded and clamped pixel position,
// numbered from 1.
std::vector<Marker> scanpath_markers(const Scanpath& scanpath, int width, int height);

inline constexpr std::uint8_t kMarkerRgb[3] = {255, 215, 0};

// Connecting lines, then filled markers, then their numbers.
RgbImage render_scanpath(const RgbImage& image, const Scanpath& scanpath,
                         const RenderSpec& spec);

}  // namespace gazedoc::io

#endif  // GAZEDOC_IO_RENDER_HPP_
