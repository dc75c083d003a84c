#ifndef GAZEDOC_BELIEF_HPP_
#define GAZEDOC_BELIEF_HPP_

#include <array>
#include <bitset>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gazedoc/density_map.hpp"
#include "gazedoc/rng.hpp"
#include "gazedoc/scanpath.hpp"
#include "gazedoc/segmentation.hpp"

namespace gazedoc {

// Action space: a 20 x 32 grid, ids 0..639 in row-major order.
inline constexpr int kGridRows = 20;
inline constexpr int kGridCols = 32;
inline constexpr int kNumCells = kGridRows * kGridCols;
inline constexpr int kNumChannels = kNumComponents + 1;
inline constexpr int kLayoutChannel = kNumComponents;

inline constexpr double kDefaultFoveaRadius = 3.0;
inline constexpr double kDefaultLowResSigma = 64.0;
inline constexpr double kDefaultIorRadius = 0.0;
// Layout-channel weights for image, text and banner label fractions.
inline constexpr std::array<double, 3> kLayoutWeights = {0.5, 0.35, 0.15};

using GridChannel = std::array<double, kNumCells>;
using ComponentChannels = std::array<GridChannel, kNumComponents>;
using CellSet = std::bitset<kNumCells>;

constexpr int cell_id(int row, int col) { return row * kGridCols + col; }
constexpr int cell_row(int cell) { return cell / kGridCols; }
constexpr int cell_col(int cell) { return cell % kGridCols; }

// Grid cell containing an image point.
int cell_of(double x, double y, int width, int height);
// Pixel coordinates of a cell's center.
std::pair<double, double> cell_center(int cell, int width, int height);

// Mean of the map over each cell's exact pixel footprint.
GridChannel discretize(const DensityMap& map);
// Divides by the channel maximum; an all-zero channel is returned as is.
GridChannel max_normalized(GridChannel channel);

// Per-cell weighted fraction of image, text and banner labels.
GridChannel layout_channel(const SegmentationMap& seg);

struct BeliefState {
  // face, text, logo, banner, image, layout
  std::array<GridChannel, kNumChannels> channels{};
  // Cells fixated so far, in no particular order.
  CellSet visited;
  // Cells excluded from selection by inhibition of return (superset of
  // visited).
  CellSet inhibited;
  // Union of all foveal masks applied so far.
  CellSet foveated;
  int t = 0;
};

// B_0 = L. Expects exactly six channels (five components + layout).
BeliefState init_belief(std::span<const GridChannel> channels);

// Cells within Euclidean grid distance `radius` of `cell`.
CellSet circular_mask(int cell, double radius);

// Inside the circular mask component channels take the high-resolution
// values; everything else, including the layout channel, is unchanged.
// Marks the cell visited and inhibits cells within ior_radius of it.
BeliefState foveate_update(const BeliefState& belief, int cell, double radius,
                           const ComponentChannels& high_res,
                           double ior_radius = kDefaultIorRadius);

// Selection distribution over the 640 cells; must sum to one and be zero on
// inhibited cells.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual GridChannel action_distribution(const BeliefState& belief) const = 0;
};

// Winner-take-all on a fixed saliency grid: all mass on the largest
// non-inhibited cell, ties to the lowest id.
class WtaPolicy : public Policy {
 public:
  explicit WtaPolicy(GridChannel saliency) : saliency_(saliency) {}
  GridChannel action_distribution(const BeliefState& belief) const override;

 private:
  GridChannel saliency_;
};

WtaPolicy wta_policy(const DensityMap& final_fdm);

class UniformPolicy : public Policy {
 public:
  GridChannel action_distribution(const BeliefState& belief) const override;
};

// Zeroes inhibited cells and renormalizes. Throws ValidationError when no
// mass remains.
GridChannel restrict_to_allowed(GridChannel dist, const CellSet& inhibited);

// Inverse-CDF draw from a distribution over cells.
int sample_cell(const GridChannel& dist, Rng& rng);

struct RolloutOptions {
  int length = 7;
  double fovea_radius = kDefaultFoveaRadius;
  double ior_radius = kDefaultIorRadius;
  std::uint64_t seed = 0;
  int image_width = kGridCols;
  int image_height = kGridRows;
};

struct Rollout {
  std::vector<int> actions;
  // Cell centers in image pixels; durations are not modeled and left at 0.
  Scanpath scanpath;
  BeliefState final_state;
};

// Samples `length` distinct cells, updating the belief after each one.
// Throws ValidationError when length is outside [1, 640].
Rollout rollout(const Policy& policy, const BeliefState& initial,
                const ComponentChannels& high_res, const RolloutOptions& options);

// Low- and high-resolution belief channels plus layout for one document.
struct BeliefInputs {
  ComponentChannels low{};
  ComponentChannels high{};
  GridChannel layout{};

  BeliefState initial() const;
};

// H = max-normalized discretized component maps, L = the same after a
// Gaussian blur of low_res_sigma source pixels, layout from the labels.
// The low-resolution blur runs at four times the grid resolution with sigma
// scaled accordingly.
BeliefInputs make_belief_inputs(std::span<const DensityMap> components,
                                const SegmentationMap& seg,
                                double low_res_sigma = kDefaultLowResSigma);

// Grid cells visited by a scanpath, with consecutive repeats collapsed.
// `collapsed` (optional) receives the number of dropped fixations.
std::vector<int> scanpath_to_actions(const Scanpath& scanpath, int width,
                                     int height, int max_actions = 0,
                                     int* collapsed = nullptr);

}  // namespace gazedoc

#endif  // GAZEDOC_BELIEF_HPP_
