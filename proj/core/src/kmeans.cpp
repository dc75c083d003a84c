#include "gazedoc/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "gazedoc/error.hpp"
#include "gazedoc/rng.hpp"

namespace gazedoc {
namespace {

struct Assignment {
  std::vector<int> labels;
  std::vector<double> distances;
  double wcss = 0.0;
};

Assignment assign_all(std::span<const LayoutVector> vectors,
                      const std::vector<LayoutVector>& centers) {
  Assignment a;
  a.labels.resize(vectors.size());
  a.distances.resize(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    int best = 0;
    double best_d = squared_distance(vectors[i], centers[0]);
    for (std::size_t c = 1; c < centers.size(); ++c) {
      const double d = squared_distance(vectors[i], centers[c]);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    a.labels[i] = best;
    a.distances[i] = best_d;
    a.wcss += best_d;
  }
  return a;
}

// Appends centers by D^2 sampling until `k` centers exist.
void seed_plus_plus(std::span<const LayoutVector> vectors, int k, Rng& rng,
                    std::vector<LayoutVector>& centers) {
  if (centers.empty()) {
    centers.push_back(vectors[uniform_index(rng, vectors.size())]);
  }
  std::vector<double> dist(vectors.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (const auto& c : centers) dist[i] = std::min(dist[i], squared_distance(vectors[i], c));
  }
  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (double d : dist) total += d;
    std::size_t pick = 0;
    if (total > 0.0) {
      const double target = uniform01(rng) * total;
      double acc = 0.0;
      pick = vectors.size() - 1;
      for (std::size_t i = 0; i < vectors.size(); ++i) {
        acc += dist[i];
        if (acc > target && dist[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = uniform_index(rng, vectors.size());
    }
    centers.push_back(vectors[pick]);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      dist[i] = std::min(dist[i], squared_distance(vectors[i], centers.back()));
    }
  }
}

void check_k(std::size_t n, int k) {
  if (k < 1) throw ValidationError("k must be at least 1");
  if (static_cast<std::size_t>(k) > n) {
    throw ValidationError("k = " + std::to_string(k) + " exceeds the number of vectors (" +
                          std::to_string(n) + ")");
  }
}

}  // namespace

double squared_distance(const LayoutVector& a, const LayoutVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

int assign_cluster(const LayoutVector& v, const ClusterModel& model) {
  if (model.centers.empty()) throw ValidationError("cluster model has no centers");
  int best = 0;
  double best_d = squared_distance(v, model.centers[0]);
  for (std::size_t c = 1; c < model.centers.size(); ++c) {
    const double d = squared_distance(v, model.centers[c]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

ClusterModel kmeans_from_centers(std::span<const LayoutVector> vectors,
                                 std::vector<LayoutVector> centers,
                                 int max_iters) {
  check_k(vectors.size(), static_cast<int>(centers.size()));
  const int k = static_cast<int>(centers.size());
  ClusterModel best;
  best.k = k;
  best.wcss = std::numeric_limits<double>::infinity();
  std::vector<int> previous;
  for (int iter = 0;; ++iter) {
    Assignment a = assign_all(vectors, centers);
    // Lloyd steps never increase wcss in exact arithmetic; tracking the best
    // state keeps that true under rounding as well.
    if (a.wcss < best.wcss) {
      best.centers = centers;
      best.assignments = a.labels;
      best.wcss = a.wcss;
      best.iterations = iter;
    }
    if (a.labels == previous || iter >= max_iters) break;

    std::vector<LayoutVector> sums(k, LayoutVector{});
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      const int c = a.labels[i];
      ++counts[c];
      for (std::size_t d = 0; d < sums[c].size(); ++d) sums[c][d] += vectors[i][d];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        for (std::size_t d = 0; d < sums[c].size(); ++d) {
          centers[c][d] = sums[c][d] / static_cast<double>(counts[c]);
        }
        continue;
      }
      // Empty cluster: move it onto the point worst served by its center.
      const auto far = std::max_element(a.distances.begin(), a.distances.end());
      const auto idx = static_cast<std::size_t>(far - a.distances.begin());
      centers[c] = vectors[idx];
      a.distances[idx] = 0.0;
    }
    previous = std::move(a.labels);
  }
  return best;
}

ClusterModel kmeans_pp(std::span<const LayoutVector> vectors, int k,
                       std::uint64_t seed, const KMeansOptions& options) {
  check_k(vectors.size(), k);
  ClusterModel best;
  const int restarts = std::max(1, options.restarts);
  for (int r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    std::vector<LayoutVector> centers;
    seed_plus_plus(vectors, k, rng, centers);
    ClusterModel m = kmeans_from_centers(vectors, std::move(centers), options.max_iters);
    if (r == 0 || m.wcss < best.wcss) best = std::move(m);
  }
  best.seed = seed;
  return best;
}

std::vector<ElbowPoint> elbow_curve(std::span<const LayoutVector> vectors,
                                    std::span<const int> k_values,
                                    std::uint64_t seed,
                                    const KMeansOptions& options) {
  if (k_values.empty()) throw ValidationError("elbow curve needs at least one k");
  std::vector<int> ks(k_values.begin(), k_values.end());
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  std::vector<ElbowPoint> curve;
  for (int k : ks) {
    ClusterModel best = kmeans_pp(vectors, k, seed, options);
    if (!curve.empty()) {
      Rng rng(derive_seed(seed ^ 0x6e657374ULL, static_cast<std::uint64_t>(k)));
      std::vector<LayoutVector> centers = curve.back().model.centers;
      seed_plus_plus(vectors, k, rng, centers);
      ClusterModel nested =
          kmeans_from_centers(vectors, std::move(centers), options.max_iters);
      nested.seed = seed;
      if (nested.wcss < best.wcss) best = std::move(nested);
    }
    curve.push_back({k, best.wcss, std::move(best)});
  }
  return curve;
}

int elbow_k(std::span<const ElbowPoint> curve) {
  if (curve.size() < 2) throw ValidationError("elbow needs at least two curve points");
  int best_k = curve[1].k;
  double best_drop = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const double prev = curve[i - 1].wcss;
    const double drop = prev > 0.0 ? (prev - curve[i].wcss) / prev : 0.0;
    if (drop > best_drop) {
      best_drop = drop;
      best_k = curve[i].k;
    }
  }
  return best_k;
}

std::vector<LayoutVector> layout_vectors(std::span<const SegStats> stats) {
  std::vector<LayoutVector> out;
  out.reserve(stats.size());
  for (const auto& s : stats) out.push_back(s.as_array());
  return out;
}

}  // namespace gazedoc
