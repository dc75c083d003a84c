#ifndef GAZEDOC_RESAMPLE_HPP_
#define GAZEDOC_RESAMPLE_HPP_

#include "gazedoc/density_map.hpp"

namespace gazedoc {

// Area-weighted resampling: every output pixel is the exact coverage-weighted
// mean of the input pixels it overlaps. Preserves the map mean.
DensityMap resize_area(const DensityMap& map, int width, int height);

// Bilinear interpolation between pixel centers, clamped at the borders.
DensityMap resize_bilinear(const DensityMap& map, int width, int height);

// Fraction of each output pixel covered by the mask.
DensityMap mask_coverage(const Mask& mask, int width, int height);

}  // namespace gazedoc

#endif  // GAZEDOC_RESAMPLE_HPP_
