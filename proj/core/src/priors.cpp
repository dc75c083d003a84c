#include "gazedoc/priors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gazedoc/error.hpp"
#include "gazedoc/resample.hpp"
#include "gazedoc/saliency_metrics.hpp"

namespace gazedoc {
namespace {

constexpr int kN = kNumComponents;
using Weights = std::array<double, kN>;
using Gram = std::array<std::array<double, kN>, kN>;

Weights gradient(const Gram& g, const Weights& h, const Weights& w) {
  Weights out{};
  for (int i = 0; i < kN; ++i) {
    double s = -h[i];
    for (int j = 0; j < kN; ++j) s += g[i][j] * w[j];
    out[i] = s;
  }
  return out;
}

double objective(const Gram& g, const Weights& h, const Weights& w) {
  double f = 0.0;
  for (int i = 0; i < kN; ++i) {
    for (int j = 0; j < kN; ++j) f += 0.5 * w[i] * g[i][j] * w[j];
    f -= h[i] * w[i];
  }
  return f;
}

std::vector<double> flat(const DensityMap& m) {
  return std::vector<double>(m.values().begin(), m.values().end());
}

DensityMap to_canonical(const DensityMap& m, int width, int height) {
  return normalized_or_zero(resize_area(m, width, height));
}

struct CanonicalItem {
  ComponentMaps components;
  DensityMap gt;
  std::vector<Fixation> fixations;
};

double total_loss(const std::vector<CanonicalItem>& items, const Weights& w,
                  int width, int height) {
  double loss = 0.0;
  for (const auto& item : items) {
    const DensityMap combined = combine_components(item.components, w, width, height);
    try {
      loss += l_total(combined, item.fixations);
    } catch (const ValidationError&) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return loss;
}

// Compass search over the weight simplex.
Weights refine_total_loss(const std::vector<CanonicalItem>& items, Weights w,
                          int width, int height) {
  double sum = 0.0;
  for (double v : w) sum += v;
  if (sum <= 0.0) w.fill(1.0 / kN);
  else for (double& v : w) v /= sum;
  double best = total_loss(items, w, width, height);
  double step = 0.25;
  while (step > 1e-4) {
    bool improved = false;
    for (int i = 0; i < kN; ++i) {
      for (double dir : {1.0, -1.0}) {
        Weights trial = w;
        trial[i] = std::max(0.0, trial[i] + dir * step);
        double s = 0.0;
        for (double v : trial) s += v;
        if (s <= 0.0) continue;
        for (double& v : trial) v /= s;
        const double loss = total_loss(items, trial, width, height);
        if (loss < best) {
          best = loss;
          w = trial;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return w;
}

}  // namespace

std::array<double, kNumComponents> nnls_projected_gradient(
    const Gram& gram, const Weights& rhs, double tolerance, int max_iters) {
  // Gershgorin bound on the largest eigenvalue of the Gram matrix.
  double lipschitz = 0.0;
  for (int i = 0; i < kN; ++i) {
    double row = 0.0;
    for (int j = 0; j < kN; ++j) row += std::abs(gram[i][j]);
    lipschitz = std::max(lipschitz, row);
  }
  Weights w{};
  if (lipschitz <= 0.0) return w;

  Weights y = w;
  double t = 1.0;
  double f_prev = objective(gram, rhs, w);
  for (int iter = 0; iter < max_iters; ++iter) {
    const Weights g = gradient(gram, rhs, y);
    Weights next{};
    for (int i = 0; i < kN; ++i) next[i] = std::max(0.0, y[i] - g[i] / lipschitz);
    const double f_next = objective(gram, rhs, next);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    if (f_next > f_prev) {
      // Adaptive restart of the momentum sequence.
      y = w;
      t = 1.0;
      continue;
    }
    for (int i = 0; i < kN; ++i) y[i] = next[i] + ((t - 1.0) / t_next) * (next[i] - w[i]);
    w = next;
    t = t_next;
    f_prev = f_next;

    const Weights gw = gradient(gram, rhs, w);
    double residual = 0.0;
    double scale = 1.0;
    for (int i = 0; i < kN; ++i) {
      residual = std::max(residual, std::abs(std::min(w[i], gw[i] / lipschitz)));
      scale = std::max(scale, std::abs(w[i]));
    }
    if (residual < tolerance * scale) break;
  }
  for (double v : w) {
    if (!std::isfinite(v)) throw NumericError("NNLS produced a non-finite weight");
  }
  return w;
}

ComponentMaps component_maps(const SegmentationMap& seg,
                             const ClusterPriors& priors) {
  const auto masks = component_masks(seg);
  ComponentMaps out;
  for (int c = 0; c < kN; ++c) {
    if (masks[c].count() == 0) {
      out[c] = DensityMap(seg.width(), seg.height());
      continue;
    }
    const DensityMap up = resize_bilinear(priors.maps[c], seg.width(), seg.height());
    out[c] = normalized_or_zero(apply_mask(up, masks[c]));
  }
  return out;
}

DensityMap combine_components(const ComponentMaps& components,
                              const Weights& weights, int width, int height) {
  std::vector<double> acc(static_cast<std::size_t>(width) * height, 0.0);
  std::vector<double> plain(acc.size(), 0.0);
  for (int c = 0; c < kN; ++c) {
    const DensityMap& m = components[c];
    if (m.empty()) continue;
    if (m.width() != width || m.height() != height) {
      throw ValidationError("component map size does not match the output size");
    }
    const auto v = m.values();
    for (std::size_t i = 0; i < acc.size(); ++i) {
      acc[i] += weights[c] * v[i];
      plain[i] += v[i];
    }
  }
  DensityMap weighted(width, height, std::move(acc));
  if (weighted.sum() > 0.0) return normalized(std::move(weighted));
  DensityMap unweighted(width, height, std::move(plain));
  if (unweighted.sum() > 0.0) return normalized(std::move(unweighted));
  return normalized(DensityMap(width, height, 1.0));
}

ComponentPriors fit_component_priors(std::span<const PriorTrainingItem> items,
                                     int num_clusters,
                                     const PriorFitOptions& options) {
  if (num_clusters < 1) throw ValidationError("need at least one cluster");
  const int w = options.width;
  const int h = options.height;
  std::vector<std::vector<const PriorTrainingItem*>> by_cluster(num_clusters);
  for (const auto& item : items) {
    if (item.cluster < 0 || item.cluster >= num_clusters) {
      throw ValidationError("training item has cluster id " +
                            std::to_string(item.cluster) + " outside [0, " +
                            std::to_string(num_clusters) + ")");
    }
    by_cluster[item.cluster].push_back(&item);
  }
  std::string missing;
  for (int c = 0; c < num_clusters; ++c) {
    if (by_cluster[c].empty()) missing += (missing.empty() ? "" : ", ") + std::to_string(c);
  }
  if (!missing.empty()) {
    throw ValidationError("no training data for cluster(s): " + missing);
  }

  ComponentPriors priors;
  priors.width = w;
  priors.height = h;
  priors.clusters.resize(num_clusters);
  for (int c = 0; c < num_clusters; ++c) {
    ClusterPriors& cp = priors.clusters[c];
    for (int comp = 0; comp < kN; ++comp) {
      std::vector<double> mean(static_cast<std::size_t>(w) * h, 0.0);
      for (const PriorTrainingItem* item : by_cluster[c]) {
        const auto& src = item->component_fdms[comp];
        if (src.width() != item->seg.width() || src.height() != item->seg.height()) {
          throw ValidationError("component FDM size does not match its segmentation");
        }
        const DensityMap small = to_canonical(src, w, h);
        const auto v = small.values();
        for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += v[i];
      }
      DensityMap m(w, h, std::move(mean));
      // A component never seen in this cluster gets a flat prior so that
      // unseen instances at inference still receive mass.
      cp.maps[comp] = m.sum() > 0.0 ? normalized(std::move(m))
                                    : normalized(DensityMap(w, h, 1.0));
    }

    Gram gram{};
    Weights rhs{};
    std::vector<CanonicalItem> canonical;
    for (const PriorTrainingItem* item : by_cluster[c]) {
      const ComponentMaps full = component_maps(item->seg, cp);
      CanonicalItem ci;
      for (int comp = 0; comp < kN; ++comp) ci.components[comp] = to_canonical(full[comp], w, h);
      ci.gt = to_canonical(item->gt_fdm, w, h);
      const double sx = static_cast<double>(w) / item->seg.width();
      const double sy = static_cast<double>(h) / item->seg.height();
      for (Fixation f : item->fixations) {
        f.x = std::min(f.x * sx, w - 1e-9);
        f.y = std::min(f.y * sy, h - 1e-9);
        ci.fixations.push_back(f);
      }
      std::array<std::vector<double>, kN> cols;
      for (int comp = 0; comp < kN; ++comp) cols[comp] = flat(ci.components[comp]);
      const auto b = ci.gt.values();
      for (int i = 0; i < kN; ++i) {
        for (int j = 0; j < kN; ++j) {
          double s = 0.0;
          for (std::size_t p = 0; p < b.size(); ++p) s += cols[i][p] * cols[j][p];
          gram[i][j] += s;
        }
        double s = 0.0;
        for (std::size_t p = 0; p < b.size(); ++p) s += cols[i][p] * b[p];
        rhs[i] += s;
      }
      canonical.push_back(std::move(ci));
    }
    cp.weights = nnls_projected_gradient(gram, rhs, options.nnls_tolerance);
    if (options.objective == FitObjective::kTotalLoss) {
      for (const auto& ci : canonical) {
        if (ci.fixations.empty()) {
          throw ValidationError("total-loss fitting needs fixations for every item");
        }
      }
      cp.weights = refine_total_loss(canonical, cp.weights, w, h);
    }
  }
  return priors;
}

SaliencyPrediction predict_saliency(const SegmentationMap& seg,
                                    const ClusterModel& model,
                                    const ComponentPriors& priors) {
  SaliencyPrediction out;
  out.cluster = assign_cluster(seg_stats(seg), model);
  if (out.cluster >= static_cast<int>(priors.clusters.size())) {
    throw ValidationError("priors do not cover cluster " + std::to_string(out.cluster));
  }
  const ClusterPriors& cp = priors.clusters[out.cluster];
  out.components = component_maps(seg, cp);
  out.final_map = combine_components(out.components, cp.weights, seg.width(), seg.height());
  return out;
}

}  // namespace gazedoc
