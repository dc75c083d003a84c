#ifndef GAZEDOC_ANALYSIS_HPP_
#define GAZEDOC_ANALYSIS_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gazedoc/density_map.hpp"
#include "gazedoc/saliency_metrics.hpp"
#include "gazedoc/scanpath.hpp"
#include "gazedoc/scanpath_metrics.hpp"
#include "gazedoc/segmentation.hpp"

namespace gazedoc {

// proportions[c][t]: share of the t-th fixations (over all scanpaths that
// reach index t) landing in component c, divided by the component's pixel
// area. Components with no pixels are absent. With column_normalize each
// column is divided by its sum over present components.
using ProportionMatrix = std::array<std::vector<std::optional<double>>, kNumComponents>;

ProportionMatrix component_fixation_proportions(std::span<const Scanpath> scanpaths,
                                                const SegmentationMap& seg,
                                                int max_fixations = kEvaluatedFixations,
                                                bool column_normalize = false);

// Component order by the mean of each row over fixation indices, highest
// first. Absent entries are ignored; fully absent components go last.
std::vector<Component> rank_components(const ProportionMatrix& proportions);

struct SaliencyScores {
  double nss = 0.0;
  double cc = 0.0;
  double kl = 0.0;
  double auc_j = 0.0;
  double sauc = 0.0;
};

// Scores a predicted map against the ground-truth FDM and fixations of one
// image. KL is taken from the ground truth to the normalized prediction.
// sAUC negatives are a seeded subsample of shuffle_pool.
SaliencyScores evaluate_saliency(const DensityMap& prediction, const DensityMap& gt_fdm,
                                 std::span<const Fixation> fixations,
                                 std::span<const Fixation> shuffle_pool, std::uint64_t seed,
                                 double kl_eps = kKlEpsilon);

SaliencyScores mean_scores(std::span<const SaliencyScores> scores);

struct ImageReport {
  std::optional<SaliencyScores> saliency;
  std::optional<ScanpathScores> scanpath;
};

struct MetricReport {
  std::map<std::string, ImageReport> per_image;
  std::optional<SaliencyScores> aggregate_saliency;
  std::optional<ScanpathScores> aggregate_scanpath;
};

// Fills the aggregates with plain means over the images that have them.
void finalize_report(MetricReport& report);

// Scores of the final map with each component's weight set to zero in turn,
// plus the full model under key "all".
std::map<std::string, SaliencyScores> component_ablation(
    const std::array<DensityMap, kNumComponents>& components,
    const std::array<double, kNumComponents>& weights, const DensityMap& gt_fdm,
    std::span<const Fixation> fixations, std::span<const Fixation> shuffle_pool,
    std::uint64_t seed);

}  // namespace gazedoc

#endif  // GAZEDOC_ANALYSIS_HPP_
