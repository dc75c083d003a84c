#ifndef GAZEDOC_PRIORS_HPP_
#define GAZEDOC_PRIORS_HPP_

#include <array>
#include <span>
#include <vector>

#include "gazedoc/density_map.hpp"
#include "gazedoc/kmeans.hpp"
#include "gazedoc/scanpath.hpp"
#include "gazedoc/segmentation.hpp"

namespace gazedoc {

// Canonical prior resolution, four times the 20x32 action grid.
inline constexpr int kPriorWidth = 128;
inline constexpr int kPriorHeight = 80;

using ComponentMaps = std::array<DensityMap, kNumComponents>;

struct ClusterPriors {
  // Normalized component priors at the canonical resolution.
  ComponentMaps maps;
  // Non-negative combination weights, one per component.
  std::array<double, kNumComponents> weights{};
};

struct ComponentPriors {
  int width = kPriorWidth;
  int height = kPriorHeight;
  std::vector<ClusterPriors> clusters;
};

struct PriorTrainingItem {
  SegmentationMap seg;
  // Ground-truth component FDMs at the segmentation's resolution.
  ComponentMaps component_fdms;
  DensityMap gt_fdm;
  int cluster = 0;
  // Only needed for FitObjective::kTotalLoss.
  std::vector<Fixation> fixations;
};

enum class FitObjective {
  // Non-negative least squares of the combined map against the GT FDM.
  kLeastSquares,
  // Minimizes the summed total loss (0.7 TV + 0.3 / NSS), starting from the
  // least-squares solution.
  kTotalLoss,
};

struct PriorFitOptions {
  int width = kPriorWidth;
  int height = kPriorHeight;
  FitObjective objective = FitObjective::kLeastSquares;
  double nnls_tolerance = 1e-8;
};

// Projected (accelerated) gradient descent for
//   min_w 0.5 w'Gw - h'w  subject to  w >= 0.
// Stops once the KKT residual max_i |min(w_i, grad_i / L)| drops below tol.
std::array<double, kNumComponents> nnls_projected_gradient(
    const std::array<std::array<double, kNumComponents>, kNumComponents>& gram,
    const std::array<double, kNumComponents>& rhs, double tolerance = 1e-8,
    int max_iters = 1000000);

// Per-cluster normalized mean of resized component FDMs, plus combination
// weights. Throws ValidationError naming every cluster without training data.
ComponentPriors fit_component_priors(std::span<const PriorTrainingItem> items,
                                     int num_clusters,
                                     const PriorFitOptions& options = {});

// Cluster priors upsampled to the segmentation and restricted to each
// component's mask, renormalized. Absent components give zero maps.
ComponentMaps component_maps(const SegmentationMap& seg,
                             const ClusterPriors& priors);

struct SaliencyPrediction {
  int cluster = 0;
  DensityMap final_map;
  ComponentMaps components;
};

// Final map = normalized sum of weighted component maps. When the weighted
// sum has no mass the unweighted sum is used, then the uniform map.
DensityMap combine_components(const ComponentMaps& components,
                              const std::array<double, kNumComponents>& weights,
                              int width, int height);

SaliencyPrediction predict_saliency(const SegmentationMap& seg,
                                    const ClusterModel& model,
                                    const ComponentPriors& priors);

}  // namespace gazedoc

#endif  // GAZEDOC_PRIORS_HPP_
