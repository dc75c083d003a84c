#include "gazedoc/belief.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gazedoc/density.hpp"
#include "gazedoc/error.hpp"
#include "gazedoc/resample.hpp"

namespace gazedoc {
namespace {

constexpr int kLowResScale = 4;

GridChannel to_grid(const DensityMap& cells) {
  GridChannel out{};
  std::copy(cells.values().begin(), cells.values().end(), out.begin());
  return out;
}

void check_cell(int cell) {
  if (cell < 0 || cell >= kNumCells) {
    throw ValidationError("cell id " + std::to_string(cell) + " is outside [0, 640)");
  }
}

}  // namespace

int cell_of(double x, double y, int width, int height) {
  const int col = std::clamp(static_cast<int>(std::floor(x * kGridCols / width)), 0,
                             kGridCols - 1);
  const int row = std::clamp(static_cast<int>(std::floor(y * kGridRows / height)), 0,
                             kGridRows - 1);
  return cell_id(row, col);
}

std::pair<double, double> cell_center(int cell, int width, int height) {
  check_cell(cell);
  const double cw = static_cast<double>(width) / kGridCols;
  const double ch = static_cast<double>(height) / kGridRows;
  return {(cell_col(cell) + 0.5) * cw, (cell_row(cell) + 0.5) * ch};
}

GridChannel discretize(const DensityMap& map) {
  return to_grid(resize_area(map, kGridCols, kGridRows));
}

GridChannel max_normalized(GridChannel channel) {
  const double peak = *std::max_element(channel.begin(), channel.end());
  if (peak > 0.0) {
    for (double& v : channel) v /= peak;
  }
  return channel;
}

GridChannel layout_channel(const SegmentationMap& seg) {
  const std::array<Label, 3> labels = {Label::kImage, Label::kText, Label::kBanner};
  GridChannel out{};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const GridChannel frac =
        to_grid(mask_coverage(seg.label_mask(labels[i]), kGridCols, kGridRows));
    for (int c = 0; c < kNumCells; ++c) out[c] += kLayoutWeights[i] * frac[c];
  }
  return out;
}

BeliefState init_belief(std::span<const GridChannel> channels) {
  if (channels.size() != kNumChannels) {
    throw ValidationError("belief state needs 6 channels, got " +
                          std::to_string(channels.size()));
  }
  BeliefState b;
  std::copy(channels.begin(), channels.end(), b.channels.begin());
  return b;
}

CellSet circular_mask(int cell, double radius) {
  check_cell(cell);
  CellSet mask;
  const int r0 = cell_row(cell);
  const int c0 = cell_col(cell);
  const double r2 = radius * radius;
  for (int r = 0; r < kGridRows; ++r) {
    for (int c = 0; c < kGridCols; ++c) {
      const double dr = r - r0;
      const double dc = c - c0;
      if (dr * dr + dc * dc <= r2) mask.set(cell_id(r, c));
    }
  }
  return mask;
}

BeliefState foveate_update(const BeliefState& belief, int cell, double radius,
                           const ComponentChannels& high_res, double ior_radius) {
  check_cell(cell);
  if (!(radius >= 0.0)) throw ValidationError("foveal radius must be >= 0");
  if (!(ior_radius >= 0.0)) throw ValidationError("IoR radius must be >= 0");
  BeliefState next = belief;
  const CellSet mask = circular_mask(cell, radius);
  for (int i = 0; i < kNumCells; ++i) {
    if (!mask.test(i)) continue;
    for (int ch = 0; ch < kNumComponents; ++ch) next.channels[ch][i] = high_res[ch][i];
  }
  next.foveated |= mask;
  next.visited.set(cell);
  next.inhibited |= circular_mask(cell, ior_radius);
  next.t = belief.t + 1;
  return next;
}

GridChannel WtaPolicy::action_distribution(const BeliefState& belief) const {
  int best = -1;
  for (int i = 0; i < kNumCells; ++i) {
    if (belief.inhibited.test(i)) continue;
    if (best < 0 || saliency_[i] > saliency_[best]) best = i;
  }
  if (best < 0) throw ValidationError("every cell is inhibited");
  GridChannel out{};
  out[best] = 1.0;
  return out;
}

WtaPolicy wta_policy(const DensityMap& final_fdm) {
  if (final_fdm.empty()) throw ValidationError("WTA policy needs a non-empty map");
  return WtaPolicy(discretize(final_fdm));
}

GridChannel UniformPolicy::action_distribution(const BeliefState& belief) const {
  const std::size_t open = kNumCells - belief.inhibited.count();
  if (open == 0) throw ValidationError("every cell is inhibited");
  GridChannel out{};
  for (int i = 0; i < kNumCells; ++i) {
    if (!belief.inhibited.test(i)) out[i] = 1.0 / static_cast<double>(open);
  }
  return out;
}

GridChannel restrict_to_allowed(GridChannel dist, const CellSet& inhibited) {
  double total = 0.0;
  for (int i = 0; i < kNumCells; ++i) {
    if (inhibited.test(i) || !(dist[i] > 0.0)) dist[i] = 0.0;
    total += dist[i];
  }
  if (!(total > 0.0)) throw ValidationError("policy puts no mass on an allowed cell");
  for (double& v : dist) v /= total;
  return dist;
}

int sample_cell(const GridChannel& dist, Rng& rng) {
  double total = 0.0;
  for (double v : dist) total += v;
  const double target = uniform01(rng) * total;
  double acc = 0.0;
  int last = -1;
  for (int i = 0; i < kNumCells; ++i) {
    if (!(dist[i] > 0.0)) continue;
    acc += dist[i];
    last = i;
    if (acc > target) return i;
  }
  if (last < 0) throw ValidationError("cannot sample from an empty distribution");
  return last;
}

Rollout rollout(const Policy& policy, const BeliefState& initial,
                const ComponentChannels& high_res, const RolloutOptions& options) {
  if (options.length < 1 || options.length > kNumCells) {
    throw ValidationError("rollout length must be in [1, 640], got " +
                          std::to_string(options.length));
  }
  Rng rng(options.seed);
  Rollout out;
  BeliefState state = initial;
  for (int step = 0; step < options.length; ++step) {
    const GridChannel dist =
        restrict_to_allowed(policy.action_distribution(state), state.inhibited);
    const int cell = sample_cell(dist, rng);
    out.actions.push_back(cell);
    const auto [x, y] = cell_center(cell, options.image_width, options.image_height);
    out.scanpath.fixations.push_back({x, y, 0.0, step});
    state = foveate_update(state, cell, options.fovea_radius, high_res, options.ior_radius);
  }
  out.final_state = std::move(state);
  return out;
}

BeliefState BeliefInputs::initial() const {
  std::array<GridChannel, kNumChannels> channels;
  std::copy(low.begin(), low.end(), channels.begin());
  channels[kLayoutChannel] = layout;
  return init_belief(channels);
}

BeliefInputs make_belief_inputs(std::span<const DensityMap> components,
                                const SegmentationMap& seg, double low_res_sigma) {
  if (components.size() != kNumComponents) {
    throw ValidationError("belief inputs need 5 component maps, got " +
                          std::to_string(components.size()));
  }
  constexpr int kSmallW = kGridCols * kLowResScale;
  constexpr int kSmallH = kGridRows * kLowResScale;
  BeliefInputs in;
  for (int c = 0; c < kNumComponents; ++c) {
    const DensityMap& m = components[c];
    if (m.width() != seg.width() || m.height() != seg.height()) {
      throw ValidationError("component map size does not match the segmentation");
    }
    in.high[c] = max_normalized(discretize(m));
    const double scale = 0.5 * (static_cast<double>(kSmallW) / m.width() +
                                static_cast<double>(kSmallH) / m.height());
    const DensityMap small = resize_area(m, kSmallW, kSmallH);
    in.low[c] = max_normalized(discretize(gaussian_blur(small, low_res_sigma * scale)));
  }
  in.layout = layout_channel(seg);
  return in;
}

std::vector<int> scanpath_to_actions(const Scanpath& scanpath, int width,
                                     int height, int max_actions, int* collapsed) {
  std::vector<int> actions;
  int dropped = 0;
  for (const Fixation& f : scanpath.fixations) {
    const int cell = cell_of(f.x, f.y, width, height);
    if (!actions.empty() && actions.back() == cell) {
      ++dropped;
      continue;
    }
    actions.push_back(cell);
  }
  if (max_actions > 0 && static_cast<int>(actions.size()) > max_actions) {
    actions.resize(max_actions);
  }
  if (collapsed) *collapsed = dropped;
  return actions;
}

}  // namespace gazedoc
