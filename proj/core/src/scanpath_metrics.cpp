#include "gazedoc/scanpath_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gazedoc/error.hpp"

namespace gazedoc {
namespace {

constexpr int kMeanShiftMaxIters = 300;

double dist(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double similarity(double difference, double scale) {
  return std::clamp(1.0 - difference / scale, 0.0, 1.0);
}

struct Saccade {
  Point2 start;
  double dx = 0.0;
  double dy = 0.0;
};

std::vector<Saccade> saccades(const Scanpath& s) {
  std::vector<Saccade> out;
  for (std::size_t i = 0; i + 1 < s.fixations.size(); ++i) {
    const Fixation& a = s.fixations[i];
    const Fixation& b = s.fixations[i + 1];
    out.push_back({{a.x, a.y}, b.x - a.x, b.y - a.y});
  }
  return out;
}

double angle_between(const Saccade& a, const Saccade& b) {
  double d = std::abs(std::atan2(a.dy, a.dx) - std::atan2(b.dy, b.dx));
  d = std::fmod(d, 2.0 * M_PI);
  return d > M_PI ? 2.0 * M_PI - d : d;
}

// Running means over the pairs that define each dimension.
struct ScoreAccumulator {
  double ss = 0.0, shape = 0.0, direction = 0.0, length = 0.0, position = 0.0;
  int n_ss = 0, n_vec = 0;

  void add(double seq, const MultiMatchResult& mm) {
    ss += seq;
    position += mm.position;
    ++n_ss;
    if (mm.shape) {
      shape += *mm.shape;
      direction += *mm.direction;
      length += *mm.length;
      ++n_vec;
    }
  }
  ScanpathScores result() const {
    ScanpathScores r;
    r.pairs = n_ss;
    if (n_ss > 0) {
      r.sequence_score = ss / n_ss;
      r.position = position / n_ss;
    }
    if (n_vec > 0) {
      r.shape = shape / n_vec;
      r.direction = direction / n_vec;
      r.length = length / n_vec;
    }
    return r;
  }
};

std::vector<Point2> pooled_points(std::span<const Scanpath> scanpaths, int max_fixations) {
  std::vector<Point2> pts;
  for (const Scanpath& s : scanpaths) {
    for (const Fixation& f : truncated(s, max_fixations).fixations) pts.push_back({f.x, f.y});
  }
  return pts;
}

}  // namespace

FixationClusterer FixationClusterer::fit(std::span<const Point2> points, double bandwidth) {
  if (points.empty()) throw ValidationError("mean-shift needs at least one fixation");
  if (!(bandwidth > 0.0)) throw ValidationError("mean-shift bandwidth must be positive");
  struct Mode {
    Point2 p;
    std::size_t support;
    std::size_t seed;
  };
  std::vector<Mode> modes;
  for (std::size_t s = 0; s < points.size(); ++s) {
    Point2 m = points[s];
    for (int iter = 0; iter < kMeanShiftMaxIters; ++iter) {
      Point2 acc{};
      std::size_t n = 0;
      for (const Point2& p : points) {
        if (dist(p, m) <= bandwidth) {
          acc.x += p.x;
          acc.y += p.y;
          ++n;
        }
      }
      const Point2 next{acc.x / n, acc.y / n};
      const double shift = dist(next, m);
      m = next;
      if (shift < 1e-3 * bandwidth) break;
    }
    std::size_t support = 0;
    for (const Point2& p : points) support += dist(p, m) <= bandwidth ? 1 : 0;
    modes.push_back({m, support, s});
  }
  std::stable_sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) {
    return a.support > b.support;
  });
  std::vector<Point2> centers;
  for (const Mode& mode : modes) {
    bool near = false;
    for (const Point2& c : centers) near = near || dist(c, mode.p) < bandwidth;
    if (!near) centers.push_back(mode.p);
  }
  return FixationClusterer(std::move(centers));
}

FixationClusterer FixationClusterer::fit(std::span<const Scanpath> scanpaths,
                                         double bandwidth) {
  return fit(pooled_points(scanpaths, 0), bandwidth);
}

int FixationClusterer::label(double x, double y) const {
  if (centers_.empty()) throw ValidationError("clusterer has not been fitted");
  int best = 0;
  double best_d = dist(centers_[0], {x, y});
  for (std::size_t i = 1; i < centers_.size(); ++i) {
    const double d = dist(centers_[i], {x, y});
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

std::vector<int> FixationClusterer::labels(const Scanpath& scanpath) const {
  std::vector<int> out;
  out.reserve(scanpath.fixations.size());
  for (const Fixation& f : scanpath.fixations) out.push_back(label(f.x, f.y));
  return out;
}

double needleman_wunsch(std::span<const int> a, std::span<const int> b,
                        const AlignmentScoring& scoring) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<double> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = scoring.gap * static_cast<double>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = scoring.gap * static_cast<double>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const double diag =
          prev[j - 1] + (a[i - 1] == b[j - 1] ? scoring.match : scoring.mismatch);
      cur[j] = std::max({diag, prev[j] + scoring.gap, cur[j - 1] + scoring.gap});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double sequence_score(const Scanpath& a, const Scanpath& b,
                      const FixationClusterer& clusterer, int max_fixations,
                      const AlignmentScoring& scoring) {
  const Scanpath ta = truncated(a, max_fixations);
  const Scanpath tb = truncated(b, max_fixations);
  if (ta.fixations.empty() || tb.fixations.empty()) {
    throw ValidationError("sequence score needs non-empty scanpaths");
  }
  const auto la = clusterer.labels(ta);
  const auto lb = clusterer.labels(tb);
  const double best = static_cast<double>(std::max(la.size(), lb.size())) * scoring.match;
  if (!(best > 0.0)) throw ValidationError("alignment match score must be positive");
  return std::clamp(needleman_wunsch(la, lb, scoring) / best, 0.0, 1.0);
}

std::vector<std::pair<int, int>> min_cost_path(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  if (n == 0 || cost[0].empty()) return {};
  const int m = static_cast<int>(cost[0].size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> acc(n, std::vector<double>(m, inf));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      double best = (i == 0 && j == 0) ? 0.0 : inf;
      if (i > 0 && j > 0) best = std::min(best, acc[i - 1][j - 1]);
      if (i > 0) best = std::min(best, acc[i - 1][j]);
      if (j > 0) best = std::min(best, acc[i][j - 1]);
      acc[i][j] = best + cost[i][j];
    }
  }
  std::vector<std::pair<int, int>> path;
  int i = n - 1;
  int j = m - 1;
  path.emplace_back(i, j);
  while (i > 0 || j > 0) {
    const double d = (i > 0 && j > 0) ? acc[i - 1][j - 1] : inf;
    const double up = i > 0 ? acc[i - 1][j] : inf;
    const double left = j > 0 ? acc[i][j - 1] : inf;
    if (d <= up && d <= left) {
      --i;
      --j;
    } else if (up <= left) {
      --i;
    } else {
      --j;
    }
    path.emplace_back(i, j);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

MultiMatchResult multimatch(const Scanpath& a, const Scanpath& b, int width,
                            int height, int max_fixations) {
  const Scanpath ta = truncated(a, max_fixations);
  const Scanpath tb = truncated(b, max_fixations);
  if (ta.fixations.empty() || tb.fixations.empty()) {
    throw ValidationError("MultiMatch needs non-empty scanpaths");
  }
  const double diagonal = std::hypot(static_cast<double>(width), static_cast<double>(height));
  MultiMatchResult out;
  if (ta.fixations.size() < 2 || tb.fixations.size() < 2) {
    std::vector<std::vector<double>> cost(ta.fixations.size(),
                                          std::vector<double>(tb.fixations.size()));
    for (std::size_t i = 0; i < ta.fixations.size(); ++i) {
      for (std::size_t j = 0; j < tb.fixations.size(); ++j) {
        cost[i][j] = dist({ta.fixations[i].x, ta.fixations[i].y},
                          {tb.fixations[j].x, tb.fixations[j].y});
      }
    }
    std::vector<double> pos;
    for (auto [i, j] : min_cost_path(cost)) pos.push_back(cost[i][j]);
    out.position = similarity(median(pos), diagonal);
    return out;
  }
  const auto sa = saccades(ta);
  const auto sb = saccades(tb);
  std::vector<std::vector<double>> cost(sa.size(), std::vector<double>(sb.size()));
  for (std::size_t i = 0; i < sa.size(); ++i) {
    for (std::size_t j = 0; j < sb.size(); ++j) {
      cost[i][j] = std::hypot(sa[i].dx - sb[j].dx, sa[i].dy - sb[j].dy);
    }
  }
  std::vector<double> shape, direction, length, position;
  for (auto [i, j] : min_cost_path(cost)) {
    shape.push_back(cost[i][j]);
    direction.push_back(angle_between(sa[i], sb[j]));
    length.push_back(std::abs(std::hypot(sa[i].dx, sa[i].dy) - std::hypot(sb[j].dx, sb[j].dy)));
    position.push_back(dist(sa[i].start, sb[j].start));
  }
  out.shape = similarity(median(shape), 2.0 * diagonal);
  out.direction = similarity(median(direction), M_PI);
  out.length = similarity(median(length), diagonal);
  out.position = similarity(median(position), diagonal);
  return out;
}

InterObserverResult inter_observer(std::span<const ImageScanpaths> images,
                                   double bandwidth, int max_fixations,
                                   const AlignmentScoring& scoring) {
  InterObserverResult result;
  int counted = 0;
  double ss = 0, shape = 0, direction = 0, length = 0, position = 0;
  for (const ImageScanpaths& img : images) {
    std::vector<const Scanpath*> usable;
    for (const Scanpath& s : img.scanpaths) {
      if (!s.fixations.empty()) usable.push_back(&s);
    }
    if (usable.size() < 2) {
      result.skipped_images.push_back(img.image_id);
      continue;
    }
    const auto clusterer =
        FixationClusterer::fit(pooled_points(img.scanpaths, max_fixations), bandwidth);
    ScoreAccumulator acc;
    for (std::size_t i = 0; i < usable.size(); ++i) {
      for (std::size_t j = 0; j < usable.size(); ++j) {
        if (i == j) continue;
        acc.add(sequence_score(*usable[i], *usable[j], clusterer, max_fixations, scoring),
                multimatch(*usable[i], *usable[j], img.width, img.height, max_fixations));
      }
    }
    const ScanpathScores s = acc.result();
    result.per_image[img.image_id] = s;
    ss += s.sequence_score;
    shape += s.shape;
    direction += s.direction;
    length += s.length;
    position += s.position;
    result.aggregate.pairs += s.pairs;
    ++counted;
  }
  if (counted > 0) {
    result.aggregate.sequence_score = ss / counted;
    result.aggregate.shape = shape / counted;
    result.aggregate.direction = direction / counted;
    result.aggregate.length = length / counted;
    result.aggregate.position = position / counted;
  }
  return result;
}

ScanpathScores score_against_humans(std::span<const Scanpath> predicted,
                                    const ImageScanpaths& humans, double bandwidth,
                                    int max_fixations, const AlignmentScoring& scoring) {
  const auto clusterer =
      FixationClusterer::fit(pooled_points(humans.scanpaths, max_fixations), bandwidth);
  ScoreAccumulator acc;
  for (const Scanpath& p : predicted) {
    for (const Scanpath& h : humans.scanpaths) {
      if (h.fixations.empty() || p.fixations.empty()) continue;
      acc.add(sequence_score(p, h, clusterer, max_fixations, scoring),
              multimatch(p, h, humans.width, humans.height, max_fixations));
    }
  }
  return acc.result();
}

}  // namespace gazedoc
