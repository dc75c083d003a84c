#ifndef GAZEDOC_SCANPATH_METRICS_HPP_
#define GAZEDOC_SCANPATH_METRICS_HPP_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gazedoc/scanpath.hpp"

namespace gazedoc {

// Two degrees of visual angle at 50 px per degree.
inline constexpr double kDefaultClusterBandwidth = 100.0;
// Number of leading fixations compared by the scanpath metrics.
inline constexpr int kEvaluatedFixations = 7;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Flat-kernel mean-shift over pooled fixations; labels are the index of the
// nearest mode (ties to the lowest index).
class FixationClusterer {
 public:
  FixationClusterer() = default;
  explicit FixationClusterer(std::vector<Point2> centers) : centers_(std::move(centers)) {}

  static FixationClusterer fit(std::span<const Point2> points,
                               double bandwidth = kDefaultClusterBandwidth);
  static FixationClusterer fit(std::span<const Scanpath> scanpaths,
                               double bandwidth = kDefaultClusterBandwidth);

  int label(double x, double y) const;
  std::vector<int> labels(const Scanpath& scanpath) const;
  const std::vector<Point2>& centers() const { return centers_; }

 private:
  std::vector<Point2> centers_;
};

struct AlignmentScoring {
  double match = 1.0;
  double mismatch = 0.0;
  double gap = 0.0;
};

// Needleman-Wunsch global alignment score.
double needleman_wunsch(std::span<const int> a, std::span<const int> b,
                        const AlignmentScoring& scoring = {});

// Alignment score of the cluster-id strings divided by max length times the
// match score, clamped to [0, 1]. Both scanpaths are cut to max_fixations
// first (no cut when max_fixations <= 0). Throws on an empty scanpath.
double sequence_score(const Scanpath& a, const Scanpath& b,
                      const FixationClusterer& clusterer,
                      int max_fixations = kEvaluatedFixations,
                      const AlignmentScoring& scoring = {});

struct MultiMatchResult {
  std::optional<double> shape;
  std::optional<double> direction;
  std::optional<double> length;
  double position = 0.0;
};

// MultiMatch similarity without the scanpath simplification pass. Saccade
// vectors are aligned by the minimum-cost monotone path through the matrix
// of vector-difference norms; each dimension is 1 - median difference along
// the path divided by 2 * diagonal (shape), pi (direction) or the diagonal
// (length, position). Scanpaths with one fixation only get a position score,
// from the fixation-distance alignment.
MultiMatchResult multimatch(const Scanpath& a, const Scanpath& b, int width,
                            int height, int max_fixations = kEvaluatedFixations);

// Index pairs of the minimum-cost monotone path from (0,0) to (n-1,m-1)
// through a cost matrix (moves: right, down, diagonal). Ties prefer the
// diagonal, then down.
std::vector<std::pair<int, int>> min_cost_path(const std::vector<std::vector<double>>& cost);

struct ScanpathScores {
  double sequence_score = 0.0;
  double shape = 0.0;
  double direction = 0.0;
  double length = 0.0;
  double position = 0.0;
  int pairs = 0;
};

struct InterObserverResult {
  std::map<std::string, ScanpathScores> per_image;
  ScanpathScores aggregate;
  std::vector<std::string> skipped_images;
};

struct ImageScanpaths {
  std::string image_id;
  int width = 0;
  int height = 0;
  std::vector<Scanpath> scanpaths;
};

// Mean over ordered subject pairs per image, then over images. Images with
// fewer than two subjects are skipped and listed.
InterObserverResult inter_observer(std::span<const ImageScanpaths> images,
                                   double bandwidth = kDefaultClusterBandwidth,
                                   int max_fixations = kEvaluatedFixations,
                                   const AlignmentScoring& scoring = {});

// Mean similarity of each predicted scanpath against every human scanpath
// of the same image.
ScanpathScores score_against_humans(std::span<const Scanpath> predicted,
                                    const ImageScanpaths& humans,
                                    double bandwidth = kDefaultClusterBandwidth,
                                    int max_fixations = kEvaluatedFixations,
                                    const AlignmentScoring& scoring = {});

}  // namespace gazedoc

#endif  // GAZEDOC_SCANPATH_METRICS_HPP_
