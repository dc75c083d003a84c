#ifndef GAZEDOC_KMEANS_HPP_
#define GAZEDOC_KMEANS_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gazedoc/segmentation.hpp"

namespace gazedoc {

using LayoutVector = std::array<double, SegStats::kDim>;

struct ClusterModel {
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<LayoutVector> centers;
  // Within-cluster sum of squared L2 distances on the training vectors.
  double wcss = 0.0;
  // Cluster of each training vector; always its nearest center.
  std::vector<int> assignments;
  int iterations = 0;
};

struct KMeansOptions {
  int max_iters = 300;
  // Independent K-means++ restarts; the lowest-wcss run is kept.
  int restarts = 5;
};

double squared_distance(const LayoutVector& a, const LayoutVector& b);

// Nearest center by L2 distance, ties to the lowest id.
int assign_cluster(const LayoutVector& v, const ClusterModel& model);
inline int assign_cluster(const SegStats& s, const ClusterModel& model) {
  return assign_cluster(s.as_array(), model);
}

// K-means++ seeding followed by Lloyd iterations until the assignment
// reaches a fixpoint or max_iters. Clusters that empty out are re-seeded
// with the point farthest from its center. Deterministic for a given seed.
// Throws ValidationError when k < 1 or k exceeds the number of vectors.
ClusterModel kmeans_pp(std::span<const LayoutVector> vectors, int k,
                       std::uint64_t seed, const KMeansOptions& options = {});

// Lloyd iterations from explicit initial centers.
ClusterModel kmeans_from_centers(std::span<const LayoutVector> vectors,
                                 std::vector<LayoutVector> centers,
                                 int max_iters);

struct ElbowPoint {
  int k = 0;
  double wcss = 0.0;
  ClusterModel model;
};

// wcss for each k (processed in increasing order). Besides the fresh
// restarts, every k also tries the previous solution's centers extended by
// K-means++ picks, which makes the curve non-increasing in k.
std::vector<ElbowPoint> elbow_curve(std::span<const LayoutVector> vectors,
                                    std::span<const int> k_values,
                                    std::uint64_t seed,
                                    const KMeansOptions& options = {});

// k with the largest relative wcss drop (wcss[k-1] - wcss[k]) / wcss[k-1]
// between consecutive entries of the curve.
int elbow_k(std::span<const ElbowPoint> curve);

std::vector<LayoutVector> layout_vectors(std::span<const SegStats> stats);

}  // namespace gazedoc

#endif  // GAZEDOC_KMEANS_HPP_
