#include "gazedoc/saliency_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "gazedoc/density.hpp"
#include "gazedoc/error.hpp"
#include "gazedoc/rng.hpp"

namespace gazedoc {
namespace {

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
};

Moments moments(std::span<const double> v) {
  Moments m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  double var = 0.0;
  double peak = 0.0;
  for (double x : v) {
    var += (x - m.mean) * (x - m.mean);
    peak = std::max(peak, std::abs(x));
  }
  m.stddev = std::sqrt(var / static_cast<double>(v.size()));
  // Rounding leaves a residue of order 1e-17 * peak on constant maps.
  if (m.stddev <= 1e-12 * peak) m.stddev = 0.0;
  return m;
}

std::size_t pixel_index(const Fixation& f, int width, int height) {
  return static_cast<std::size_t>(pixel_row(f.y, height)) * width +
         pixel_column(f.x, width);
}

bool is_constant(const DensityMap& m) {
  const auto v = m.values();
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo == *hi;
}

// Trapezoidal area under (fp, tp) points, which must be sorted by threshold.
double trapezoid(const std::vector<double>& fp, const std::vector<double>& tp) {
  double area = 0.0;
  for (std::size_t i = 1; i < fp.size(); ++i) {
    area += (fp[i] - fp[i - 1]) * (tp[i] + tp[i - 1]) * 0.5;
  }
  return area;
}

}  // namespace

double nss(const DensityMap& salmap, std::span<const Fixation> fixations) {
  if (fixations.empty()) throw ValidationError("NSS needs at least one fixation");
  if (salmap.empty()) throw ValidationError("NSS undefined for an empty map");
  const Moments m = moments(salmap.values());
  if (m.stddev == 0.0) throw ValidationError("NSS undefined for a zero-variance map");
  double total = 0.0;
  for (const Fixation& f : fixations) {
    total += (salmap.values()[pixel_index(f, salmap.width(), salmap.height())] - m.mean) /
             m.stddev;
  }
  return total / static_cast<double>(fixations.size());
}

double cc(const DensityMap& a, const DensityMap& b) {
  if (!a.same_shape(b)) throw ValidationError("CC needs maps of equal size");
  if (a.empty()) throw ValidationError("CC undefined for empty maps");
  const Moments ma = moments(a.values());
  const Moments mb = moments(b.values());
  if (ma.stddev == 0.0 || mb.stddev == 0.0) {
    throw ValidationError("CC undefined for a zero-variance map");
  }
  const auto va = a.values();
  const auto vb = b.values();
  double s = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    s += (va[i] - ma.mean) * (vb[i] - mb.mean);
  }
  const double r = s / (static_cast<double>(va.size()) * ma.stddev * mb.stddev);
  return std::clamp(r, -1.0, 1.0);
}

double kl_divergence(const DensityMap& p, const DensityMap& q, double eps) {
  if (!p.same_shape(q)) throw ValidationError("KL needs maps of equal size");
  for (const DensityMap* m : {&p, &q}) {
    if (std::abs(m->sum() - 1.0) > 1e-6) {
      throw ValidationError("KL needs normalized maps (sum = " +
                            std::to_string(m->sum()) + ")");
    }
  }
  const auto vp = p.values();
  const auto vq = q.values();
  double kl = 0.0;
  for (std::size_t i = 0; i < vp.size(); ++i) {
    if (vp[i] > 0.0) kl += vp[i] * std::log((vp[i] + eps) / (vq[i] + eps));
  }
  return std::max(kl, 0.0);
}

double auc_judd(const DensityMap& salmap, std::span<const Fixation> fixations) {
  if (fixations.empty()) throw ValidationError("AUC needs at least one fixation");
  if (salmap.empty()) throw ValidationError("AUC undefined for an empty map");
  if (is_constant(salmap)) return 0.5;
  const int w = salmap.width();
  const int h = salmap.height();
  const auto values = salmap.values();
  std::vector<std::uint8_t> fixated(values.size(), 0);
  std::vector<double> pos;
  pos.reserve(fixations.size());
  for (const Fixation& f : fixations) {
    const std::size_t idx = pixel_index(f, w, h);
    fixated[idx] = 1;
    pos.push_back(values[idx]);
  }
  std::vector<double> neg;
  neg.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!fixated[i]) neg.push_back(values[i]);
  }
  if (neg.empty()) throw ValidationError("AUC undefined when every pixel is fixated");
  std::sort(pos.begin(), pos.end(), std::greater<>());
  std::sort(neg.begin(), neg.end(), std::greater<>());

  std::vector<double> fp{0.0};
  std::vector<double> tp{0.0};
  std::size_t ip = 0;
  std::size_t in = 0;
  while (ip < pos.size()) {
    const double thr = pos[ip];
    while (ip < pos.size() && pos[ip] >= thr) ++ip;
    while (in < neg.size() && neg[in] >= thr) ++in;
    tp.push_back(static_cast<double>(ip) / pos.size());
    fp.push_back(static_cast<double>(in) / neg.size());
  }
  fp.push_back(1.0);
  tp.push_back(1.0);
  return trapezoid(fp, tp);
}

double auc_shuffled(const DensityMap& salmap, std::span<const Fixation> fixations,
                    std::span<const Fixation> shuffle_fixations) {
  if (fixations.empty()) throw ValidationError("sAUC needs at least one fixation");
  const int w = salmap.width();
  const int h = salmap.height();
  const auto values = salmap.values();
  std::vector<std::uint8_t> fixated(values.size(), 0);
  std::vector<double> pos;
  for (const Fixation& f : fixations) {
    const std::size_t idx = pixel_index(f, w, h);
    fixated[idx] = 1;
    pos.push_back(values[idx]);
  }
  std::vector<double> neg;
  for (const Fixation& f : shuffle_fixations) {
    if (!(f.x >= 0.0 && f.x < w && f.y >= 0.0 && f.y < h)) continue;
    const std::size_t idx = pixel_index(f, w, h);
    if (!fixated[idx]) neg.push_back(values[idx]);
  }
  if (neg.empty()) {
    throw ValidationError("sAUC needs a shuffle fixation away from the positives");
  }
  // Rank-sum form of the ROC area with ties counted one half.
  std::sort(neg.begin(), neg.end());
  double wins = 0.0;
  for (double p : pos) {
    const auto lo = std::lower_bound(neg.begin(), neg.end(), p);
    const auto hi = std::upper_bound(lo, neg.end(), p);
    wins += static_cast<double>(lo - neg.begin()) + 0.5 * static_cast<double>(hi - lo);
  }
  return wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

std::vector<Fixation> sample_shuffle_fixations(std::span<const Fixation> pool,
                                               std::size_t positives,
                                               std::uint64_t seed, int cap_factor) {
  const std::size_t cap = positives * static_cast<std::size_t>(std::max(cap_factor, 1));
  if (pool.size() <= cap) return {pool.begin(), pool.end()};
  std::vector<std::size_t> idx(pool.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Rng rng(seed);
  for (std::size_t i = 0; i < cap; ++i) {
    const std::size_t j = i + uniform_index(rng, idx.size() - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(cap);
  std::sort(idx.begin(), idx.end());
  std::vector<Fixation> out;
  out.reserve(cap);
  for (std::size_t i : idx) out.push_back(pool[i]);
  return out;
}

double l_total(const DensityMap& pred, std::span<const Fixation> fixations) {
  const double s = nss(pred, fixations);
  if (!(s > 0.0)) throw ValidationError("loss undefined for non-positive NSS");
  return kLambdaTv * total_variation(normalized(pred)) + kLambdaNss / s;
}

}  // namespace gazedoc
