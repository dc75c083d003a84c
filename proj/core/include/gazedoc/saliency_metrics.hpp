#ifndef GAZEDOC_SALIENCY_METRICS_HPP_
#define GAZEDOC_SALIENCY_METRICS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "gazedoc/density_map.hpp"
#include "gazedoc/scanpath.hpp"

namespace gazedoc {

inline constexpr double kKlEpsilon = 2.2e-16;
inline constexpr double kLambdaTv = 0.7;
inline constexpr double kLambdaNss = 0.3;

// Normalized scanpath saliency: mean of the z-scored map (population
// standard deviation) at the pixels containing the fixations.
// Throws ValidationError("NSS undefined ...") for a zero-variance map.
double nss(const DensityMap& salmap, std::span<const Fixation> fixations);

// Pearson correlation over pixels.
double cc(const DensityMap& a, const DensityMap& b);

// sum p log((p + eps) / (q + eps)); both maps must sum to 1 within 1e-6.
double kl_divergence(const DensityMap& p, const DensityMap& q,
                     double eps = kKlEpsilon);

// Judd AUC. Positives are the saliency values at fixations, negatives the
// values at every pixel without a fixation; thresholds are the distinct
// positive values. A constant map returns 0.5.
double auc_judd(const DensityMap& salmap, std::span<const Fixation> fixations);

// Shuffled AUC: negatives are the saliency values at fixations taken from
// other images. Shuffle fixations landing on a fixated pixel or outside the
// map are dropped. Ties count one half.
double auc_shuffled(const DensityMap& salmap, std::span<const Fixation> fixations,
                    std::span<const Fixation> shuffle_fixations);

// Seeded subsample of at most cap_factor * positives shuffle fixations.
std::vector<Fixation> sample_shuffle_fixations(std::span<const Fixation> pool,
                                               std::size_t positives,
                                               std::uint64_t seed,
                                               int cap_factor = 10);

// 0.7 * TV(normalized pred) + 0.3 / NSS(pred). Throws ValidationError when
// NSS is not positive.
double l_total(const DensityMap& pred, std::span<const Fixation> fixations);

}  // namespace gazedoc

#endif  // GAZEDOC_SALIENCY_METRICS_HPP_
