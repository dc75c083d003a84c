#ifndef GAZEDOC_TESTS_ORACLES_HPP_
#define GAZEDOC_TESTS_ORACLES_HPP_

// Slow reference implementations used as test oracles. They are written
// from the definitions, without sharing code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "gazedoc/density_map.hpp"
#include "gazedoc/rng.hpp"
#include "gazedoc/scanpath.hpp"

namespace oracle {

using gazedoc::DensityMap;
using gazedoc::Fixation;
using gazedoc::Scanpath;

inline int nearest_pixel(double v, int n) {
  // Coordinates are non-negative, so halves round up.
  return std::clamp(static_cast<int>(std::lround(v)), 0, n - 1);
}

// Full 2D scatter of every pixel with a kernel renormalized over its
// in-bounds footprint.
inline std::vector<double> blur(const std::vector<double>& src, int w, int h, double sigma) {
  if (sigma == 0.0) return src;
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> out(src.size(), 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = src[y * w + x];
      if (v == 0.0) continue;
      double z = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const int xx = x + dx, yy = y + dy;
          if (xx < 0 || yy < 0 || xx >= w || yy >= h) continue;
          z += std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
        }
      }
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const int xx = x + dx, yy = y + dy;
          if (xx < 0 || yy < 0 || xx >= w || yy >= h) continue;
          out[yy * w + xx] += v * std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma)) / z;
        }
      }
    }
  }
  return out;
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / v.size();
}

inline double population_sd(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / v.size());
}

inline std::vector<double> values(const DensityMap& m) {
  return {m.values().begin(), m.values().end()};
}

inline double at_fixation(const DensityMap& m, const Fixation& f) {
  return m(nearest_pixel(f.x, m.width()), nearest_pixel(f.y, m.height()));
}

inline double nss(const DensityMap& m, const std::vector<Fixation>& fix) {
  const auto v = values(m);
  const double mu = mean(v);
  const double sd = population_sd(v);
  double s = 0.0;
  for (const Fixation& f : fix) s += (at_fixation(m, f) - mu) / sd;
  return s / fix.size();
}

inline double cc(const DensityMap& a, const DensityMap& b) {
  const auto va = values(a);
  const auto vb = values(b);
  const double ma = mean(va), mb = mean(vb);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    sab += (va[i] - ma) * (vb[i] - mb);
    saa += (va[i] - ma) * (va[i] - ma);
    sbb += (vb[i] - mb) * (vb[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

inline double kl(const DensityMap& p, const DensityMap& q, double eps) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p.values()[i];
    if (pi > 0.0) s += pi * std::log((pi + eps) / (q.values()[i] + eps));
  }
  return s;
}

inline double trapezoid(const std::vector<std::pair<double, double>>& roc) {
  double a = 0.0;
  for (std::size_t i = 1; i < roc.size(); ++i) {
    a += (roc[i].first - roc[i - 1].first) * (roc[i].second + roc[i - 1].second) / 2.0;
  }
  return a;
}

// Judd AUC by explicit threshold enumeration: for every distinct fixated
// value count how many positives and non-fixated pixels reach it.
inline double auc_judd(const DensityMap& m, const std::vector<Fixation>& fix) {
  const int w = m.width(), h = m.height();
  std::vector<bool> fixated(m.size(), false);
  std::vector<double> pos;
  for (const Fixation& f : fix) {
    const int i = nearest_pixel(f.y, h) * w + nearest_pixel(f.x, w);
    fixated[i] = true;
    pos.push_back(m.values()[i]);
  }
  std::vector<double> thresholds = pos;
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  std::size_t n_neg = 0;
  for (std::size_t i = 0; i < m.size(); ++i) n_neg += fixated[i] ? 0 : 1;
  std::vector<std::pair<double, double>> roc{{0.0, 0.0}};
  for (double t : thresholds) {
    double tp = 0.0, fp = 0.0;
    for (double p : pos) tp += p >= t ? 1.0 : 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!fixated[i] && m.values()[i] >= t) fp += 1.0;
    }
    roc.emplace_back(fp / n_neg, tp / pos.size());
  }
  roc.emplace_back(1.0, 1.0);
  return trapezoid(roc);
}

// Mann-Whitney statistic over all (positive, negative) pairs.
inline double pairwise_auc(const std::vector<double>& pos, const std::vector<double>& neg) {
  double wins = 0.0;
  for (double p : pos) {
    for (double n : neg) wins += p > n ? 1.0 : (p == n ? 0.5 : 0.0);
  }
  return wins / (static_cast<double>(pos.size()) * neg.size());
}

inline double sauc(const DensityMap& m, const std::vector<Fixation>& fix,
                   const std::vector<Fixation>& shuffled) {
  const int w = m.width(), h = m.height();
  std::vector<int> fixated_idx;
  std::vector<double> pos, neg;
  for (const Fixation& f : fix) {
    const int i = nearest_pixel(f.y, h) * w + nearest_pixel(f.x, w);
    fixated_idx.push_back(i);
    pos.push_back(m.values()[i]);
  }
  for (const Fixation& f : shuffled) {
    const int i = nearest_pixel(f.y, h) * w + nearest_pixel(f.x, w);
    if (std::find(fixated_idx.begin(), fixated_idx.end(), i) != fixated_idx.end()) continue;
    neg.push_back(m.values()[i]);
  }
  return pairwise_auc(pos, neg);
}

// Global alignment score by recursion over the full table.
inline double alignment(const std::vector<int>& a, const std::vector<int>& b, double match,
                        double mismatch, double gap) {
  std::vector<std::vector<double>> t(a.size() + 1, std::vector<double>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) t[i][0] = gap * i;
  for (std::size_t j = 0; j <= b.size(); ++j) t[0][j] = gap * j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const double sub = a[i - 1] == b[j - 1] ? match : mismatch;
      t[i][j] = std::max({t[i - 1][j - 1] + sub, t[i - 1][j] + gap, t[i][j - 1] + gap});
    }
  }
  return t[a.size()][b.size()];
}

// Longest common subsequence by enumerating every subsequence of the
// shorter string. With match 1 and mismatch = gap = 0 this is the alignment
// score.
inline int lcs_enumerated(const std::vector<int>& a, const std::vector<int>& b) {
  const auto& s = a.size() <= b.size() ? a : b;
  const auto& l = a.size() <= b.size() ? b : a;
  int best = 0;
  for (unsigned mask = 0; mask < (1u << s.size()); ++mask) {
    std::vector<int> sub;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (mask & (1u << i)) sub.push_back(s[i]);
    }
    std::size_t k = 0;
    for (std::size_t j = 0; j < l.size() && k < sub.size(); ++j) {
      if (l[j] == sub[k]) ++k;
    }
    if (k == sub.size()) best = std::max(best, static_cast<int>(sub.size()));
  }
  return best;
}

// Every monotone path (right, down, diagonal) from (0,0) to (n-1,m-1).
inline void enumerate_paths(int n, int m, int i, int j, std::vector<std::pair<int, int>>& cur,
                            const std::function<void(const std::vector<std::pair<int, int>>&)>& fn) {
  cur.emplace_back(i, j);
  if (i == n - 1 && j == m - 1) {
    fn(cur);
  } else {
    if (i + 1 < n && j + 1 < m) enumerate_paths(n, m, i + 1, j + 1, cur, fn);
    if (i + 1 < n) enumerate_paths(n, m, i + 1, j, cur, fn);
    if (j + 1 < m) enumerate_paths(n, m, i, j + 1, cur, fn);
  }
  cur.pop_back();
}

inline std::vector<std::pair<int, int>> cheapest_path(const std::vector<std::vector<double>>& c) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(c[0].size());
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<int, int>> best_path, cur;
  enumerate_paths(n, m, 0, 0, cur, [&](const std::vector<std::pair<int, int>>& p) {
    double s = 0.0;
    for (auto [i, j] : p) s += c[i][j];
    if (s < best) {
      best = s;
      best_path = p;
    }
  });
  return best_path;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

struct MultiMatch {
  std::optional<double> shape, direction, length;
  double position = 0.0;
};

// MultiMatch over saccade vectors aligned by exhaustive path search.
inline MultiMatch multimatch(const Scanpath& a, const Scanpath& b, int w, int h) {
  const double diag = std::sqrt(double(w) * w + double(h) * h);
  const auto& fa = a.fixations;
  const auto& fb = b.fixations;
  auto sim = [](double d, double s) { return std::clamp(1.0 - d / s, 0.0, 1.0); };
  MultiMatch r;
  if (fa.size() < 2 || fb.size() < 2) {
    std::vector<std::vector<double>> c(fa.size(), std::vector<double>(fb.size()));
    for (std::size_t i = 0; i < fa.size(); ++i) {
      for (std::size_t j = 0; j < fb.size(); ++j) {
        c[i][j] = std::hypot(fa[i].x - fb[j].x, fa[i].y - fb[j].y);
      }
    }
    std::vector<double> d;
    for (auto [i, j] : cheapest_path(c)) d.push_back(c[i][j]);
    r.position = sim(median(d), diag);
    return r;
  }
  struct V {
    double x0, y0, dx, dy;
  };
  auto vecs = [](const std::vector<Fixation>& f) {
    std::vector<V> v;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
      v.push_back({f[i].x, f[i].y, f[i + 1].x - f[i].x, f[i + 1].y - f[i].y});
    }
    return v;
  };
  const auto va = vecs(fa), vb = vecs(fb);
  std::vector<std::vector<double>> c(va.size(), std::vector<double>(vb.size()));
  for (std::size_t i = 0; i < va.size(); ++i) {
    for (std::size_t j = 0; j < vb.size(); ++j) {
      c[i][j] = std::hypot(va[i].dx - vb[j].dx, va[i].dy - vb[j].dy);
    }
  }
  std::vector<double> sh, di, le, po;
  for (auto [i, j] : cheapest_path(c)) {
    sh.push_back(c[i][j]);
    // Angle between the two vectors from their dot product.
    const double na = std::hypot(va[i].dx, va[i].dy), nb = std::hypot(vb[j].dx, vb[j].dy);
    double cosang = (va[i].dx * vb[j].dx + va[i].dy * vb[j].dy) / (na * nb);
    di.push_back(std::acos(std::clamp(cosang, -1.0, 1.0)));
    le.push_back(std::abs(na - nb));
    po.push_back(std::hypot(va[i].x0 - vb[j].x0, va[i].y0 - vb[j].y0));
  }
  r.shape = sim(median(sh), 2.0 * diag);
  r.direction = sim(median(di), M_PI);
  r.length = sim(median(le), diag);
  r.position = sim(median(po), diag);
  return r;
}

inline double total_variation(const DensityMap& m) {
  double tv = 0.0;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (x + 1 < m.width()) tv += std::abs(m(x + 1, y) - m(x, y));
      if (y + 1 < m.height()) tv += std::abs(m(x, y + 1) - m(x, y));
    }
  }
  return tv;
}

// Random instances.

inline DensityMap random_map(gazedoc::Rng& rng, int w, int h) {
  std::vector<double> v(static_cast<std::size_t>(w) * h);
  for (double& x : v) x = gazedoc::uniform01(rng);
  return DensityMap(w, h, std::move(v));
}

inline std::vector<Fixation> random_fixations(gazedoc::Rng& rng, int n, int w, int h) {
  std::vector<Fixation> f(n);
  for (int i = 0; i < n; ++i) {
    f[i].x = gazedoc::uniform(rng, 0.0, w - 1.0);
    f[i].y = gazedoc::uniform(rng, 0.0, h - 1.0);
    f[i].duration_ms = gazedoc::uniform(rng, 100.0, 500.0);
    f[i].index = i;
  }
  return f;
}

inline Scanpath random_scanpath(gazedoc::Rng& rng, int n, int w, int h) {
  Scanpath s;
  s.image_id = "img";
  s.subject_id = "s";
  s.fixations = random_fixations(rng, n, w, h);
  return s;
}

}  // namespace oracle

#endif  // GAZEDOC_TESTS_ORACLES_HPP_
