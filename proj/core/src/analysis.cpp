#include "gazedoc/analysis.hpp"

#include <algorithm>
#include <numeric>

#include "gazedoc/error.hpp"
#include "gazedoc/priors.hpp"
#include "gazedoc/saliency_metrics.hpp"

namespace gazedoc {

ProportionMatrix component_fixation_proportions(std::span<const Scanpath> scanpaths,
                                                const SegmentationMap& seg,
                                                int max_fixations, bool column_normalize) {
  if (max_fixations < 1) throw ValidationError("max_fixations must be at least 1");
  const auto masks = component_masks(seg);
  std::array<double, kNumComponents> area{};
  for (int c = 0; c < kNumComponents; ++c) area[c] = static_cast<double>(masks[c].count());

  ProportionMatrix out;
  for (auto& row : out) row.assign(max_fixations, std::nullopt);
  for (int t = 0; t < max_fixations; ++t) {
    std::array<double, kNumComponents> hits{};
    int total = 0;
    for (const Scanpath& s : scanpaths) {
      if (static_cast<int>(s.fixations.size()) <= t) continue;
      const Fixation& f = s.fixations[t];
      const int x = pixel_column(f.x, seg.width());
      const int y = pixel_row(f.y, seg.height());
      ++total;
      for (int c = 0; c < kNumComponents; ++c) hits[c] += masks[c](x, y) ? 1.0 : 0.0;
    }
    if (total == 0) continue;
    double column_sum = 0.0;
    for (int c = 0; c < kNumComponents; ++c) {
      if (area[c] == 0.0) continue;
      const double v = hits[c] / total / area[c];
      out[c][t] = v;
      column_sum += v;
    }
    if (column_normalize && column_sum > 0.0) {
      for (int c = 0; c < kNumComponents; ++c) {
        if (out[c][t]) *out[c][t] /= column_sum;
      }
    }
  }
  return out;
}

std::vector<Component> rank_components(const ProportionMatrix& proportions) {
  std::vector<std::pair<double, int>> keyed;
  std::vector<Component> absent;
  for (int c = 0; c < kNumComponents; ++c) {
    double sum = 0.0;
    int n = 0;
    for (const auto& v : proportions[c]) {
      if (v) {
        sum += *v;
        ++n;
      }
    }
    if (n == 0) {
      absent.push_back(kAllComponents[c]);
    } else {
      keyed.emplace_back(sum / n, c);
    }
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<Component> order;
  for (const auto& [score, c] : keyed) order.push_back(kAllComponents[c]);
  order.insert(order.end(), absent.begin(), absent.end());
  return order;
}

SaliencyScores evaluate_saliency(const DensityMap& prediction, const DensityMap& gt_fdm,
                                 std::span<const Fixation> fixations,
                                 std::span<const Fixation> shuffle_pool, std::uint64_t seed,
                                 double kl_eps) {
  if (!prediction.same_shape(gt_fdm)) {
    throw ValidationError("prediction and ground truth differ in size");
  }
  SaliencyScores s;
  s.nss = nss(prediction, fixations);
  s.cc = cc(prediction, gt_fdm);
  s.kl = kl_divergence(normalized(gt_fdm), normalized(prediction), kl_eps);
  s.auc_j = auc_judd(prediction, fixations);
  const auto negatives = sample_shuffle_fixations(shuffle_pool, fixations.size(), seed);
  s.sauc = auc_shuffled(prediction, fixations, negatives);
  return s;
}

SaliencyScores mean_scores(std::span<const SaliencyScores> scores) {
  SaliencyScores m;
  if (scores.empty()) return m;
  for (const SaliencyScores& s : scores) {
    m.nss += s.nss;
    m.cc += s.cc;
    m.kl += s.kl;
    m.auc_j += s.auc_j;
    m.sauc += s.sauc;
  }
  const double n = static_cast<double>(scores.size());
  m.nss /= n;
  m.cc /= n;
  m.kl /= n;
  m.auc_j /= n;
  m.sauc /= n;
  return m;
}

void finalize_report(MetricReport& report) {
  std::vector<SaliencyScores> sal;
  ScanpathScores sp;
  int n_sp = 0;
  for (const auto& [id, r] : report.per_image) {
    if (r.saliency) sal.push_back(*r.saliency);
    if (r.scanpath) {
      sp.sequence_score += r.scanpath->sequence_score;
      sp.shape += r.scanpath->shape;
      sp.direction += r.scanpath->direction;
      sp.length += r.scanpath->length;
      sp.position += r.scanpath->position;
      sp.pairs += r.scanpath->pairs;
      ++n_sp;
    }
  }
  report.aggregate_saliency.reset();
  report.aggregate_scanpath.reset();
  if (!sal.empty()) report.aggregate_saliency = mean_scores(sal);
  if (n_sp > 0) {
    sp.sequence_score /= n_sp;
    sp.shape /= n_sp;
    sp.direction /= n_sp;
    sp.length /= n_sp;
    sp.position /= n_sp;
    report.aggregate_scanpath = sp;
  }
}

std::map<std::string, SaliencyScores> component_ablation(
    const std::array<DensityMap, kNumComponents>& components,
    const std::array<double, kNumComponents>& weights, const DensityMap& gt_fdm,
    std::span<const Fixation> fixations, std::span<const Fixation> shuffle_pool,
    std::uint64_t seed) {
  std::map<std::string, SaliencyScores> out;
  const int w = gt_fdm.width();
  const int h = gt_fdm.height();
  out["all"] = evaluate_saliency(combine_components(components, weights, w, h), gt_fdm,
                                 fixations, shuffle_pool, seed);
  for (int c = 0; c < kNumComponents; ++c) {
    auto dropped = weights;
    dropped[c] = 0.0;
    out[std::string(component_name(kAllComponents[c]))] =
        evaluate_saliency(combine_components(components, dropped, w, h), gt_fdm, fixations,
                          shuffle_pool, seed);
  }
  return out;
}

}  // namespace gazedoc
