#ifndef GAZEDOC_DENSITY_HPP_
#define GAZEDOC_DENSITY_HPP_

#include <optional>
#include <span>
#include <vector>

#include "gazedoc/density_map.hpp"
#include "gazedoc/scanpath.hpp"

namespace gazedoc {

// 50 px correspond to one degree of visual angle; the smoothing kernel spans
// half of that.
inline constexpr double kDefaultFdmSigma = 25.0;

enum class MapScale { kNormalized, kRaw };

// Separable Gaussian blur truncated at radius ceil(3 sigma). Each source
// pixel's kernel is renormalized over the in-bounds part of its footprint,
// so total mass is conserved exactly. sigma == 0 returns the input.
DensityMap gaussian_blur(const DensityMap& map, double sigma);

// Deposits one unit (or its duration, when weight_by_duration is set) per
// fixation with bilinear weights on the four nearest pixels.
DensityMap splat_fixations(std::span<const Fixation> fixations, int width,
                           int height, bool weight_by_duration = false);

// Blurred impulse sum with mass equal to the fixation count.
DensityMap build_fdm_raw(std::span<const Fixation> fixations, int width,
                         int height, double sigma = kDefaultFdmSigma);
// build_fdm_raw, normalized to sum 1.
DensityMap build_fdm(std::span<const Fixation> fixations, int width,
                     int height, double sigma = kDefaultFdmSigma);

// blur(gt_fdm * mask). A component absent from the mask yields the zero map
// regardless of the requested scale.
DensityMap component_fdm(const DensityMap& gt_fdm, const Mask& mask,
                         double sigma = kDefaultFdmSigma,
                         MapScale scale = MapScale::kNormalized);

// blur(whole_fdm * ~(union of component masks)).
DensityMap residual_image_fdm(const DensityMap& whole_fdm,
                              std::span<const Mask> component_masks,
                              double sigma = kDefaultFdmSigma,
                              MapScale scale = MapScale::kNormalized);

// Duration-weighted density. The result keeps raw mass (sum of durations in
// ms); call normalized() for a distribution.
DensityMap dwell_map(std::span<const Fixation> fixations, int width,
                     int height, double sigma = kDefaultFdmSigma);

// Shannon entropy of the normalized map in bits.
double fdm_entropy(const DensityMap& map);

// Anisotropic total variation: sum of absolute forward differences.
double total_variation(const DensityMap& map);

// Mean absolute difference between two normalized maps inside each mask.
// Empty masks yield std::nullopt.
std::vector<std::optional<double>> fixation_dwell_difference(
    const DensityMap& fdm, const DensityMap& dwell, std::span<const Mask> masks);

// Divides present entries by their sum; absent entries stay absent.
std::vector<std::optional<double>> normalize_present(
    std::vector<std::optional<double>> values);

}  // namespace gazedoc

#endif  // GAZEDOC_DENSITY_HPP_
