#ifndef GAZEDOC_IO_RASTER_HPP_
#define GAZEDOC_IO_RASTER_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gazedoc/density_map.hpp"
#include "gazedoc/io/atomic_file.hpp"
#include "gazedoc/segmentation.hpp"
#include "gazedoc/synthetic.hpp"

namespace gazedoc::io {

// Label PNG: 8-bit, one channel, values 0..4. Face mask PNG: 8-bit, one
// channel, values 0 or 255. Unreadable files raise IoError, format problems
// ValidationError.
SegmentationMap load_segmentation(const std::filesystem::path& path,
                                  const std::optional<std::filesystem::path>& face_mask = {});
std::string encode_segmentation_png(const SegmentationMap& seg);
std::string encode_mask_png(const Mask& mask);
Mask load_mask(const std::filesystem::path& path);

// 16-bit grayscale PNG holding round(65535 * v / max) and a JSON sidecar
// (same path, .json extension) with version, max, normalized, width and
// height. Loading a map flagged normalized renormalizes it.
std::vector<StagedFile> density_map_files(const DensityMap& map,
                                          const std::filesystem::path& png_path);
void save_density_map(const DensityMap& map, const std::filesystem::path& png_path);
DensityMap load_density_map(const std::filesystem::path& png_path);
std::filesystem::path sidecar_path(const std::filesystem::path& png_path);

RgbImage load_rgb(const std::filesystem::path& path);
std::string encode_rgb_png(const RgbImage& image);

}  // namespace gazedoc::io

#endif  // GAZEDOC_IO_RASTER_HPP_
