#include "gazedoc/belief.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <set>

#include "gazedoc/density.hpp"
#include "gazedoc/error.hpp"
#include "gazedoc/imitation.hpp"
#include "oracles.hpp"

using namespace gazedoc;

namespace {

GridChannel random_channel(Rng& rng) {
  GridChannel g;
  for (double& v : g) v = uniform01(rng);
  return g;
}

ComponentChannels random_components(Rng& rng) {
  ComponentChannels c;
  for (auto& g : c) g = random_channel(rng);
  return c;
}

BeliefState random_state(Rng& rng) {
  std::array<GridChannel, kNumChannels> ch;
  for (auto& g : ch) g = random_channel(rng);
  return init_belief(ch);
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST(Grid, Layout) {
  EXPECT_EQ(kNumCells, 640);
  EXPECT_EQ(cell_id(0, 0), 0);
  EXPECT_EQ(cell_id(19, 31), 639);
  EXPECT_EQ(cell_row(33), 1);
  EXPECT_EQ(cell_col(33), 1);
  EXPECT_EQ(cell_of(0, 0, 480, 320), 0);
  EXPECT_EQ(cell_of(479.9, 319.9, 480, 320), 639);
  const auto [x, y] = cell_center(33, 480, 320);
  EXPECT_DOUBLE_EQ(x, 22.5);
  EXPECT_DOUBLE_EQ(y, 24.0);
  EXPECT_EQ(cell_of(x, y, 480, 320), 33);
}

TEST(Discretize, ConstantMap) {
  const GridChannel g = discretize(DensityMap(480, 320, 0.7));
  for (double v : g) EXPECT_NEAR(v, 0.7, 1e-15);
}

TEST(Discretize, ImpulseCellIsMax) {
  DensityMap m(480, 320);
  m.at(15 * 7 + 3, 16 * 11 + 9) = 5.0;
  const GridChannel g = discretize(m);
  const int arg = static_cast<int>(std::max_element(g.begin(), g.end()) - g.begin());
  EXPECT_EQ(arg, cell_id(11, 7));
}

TEST(Discretize, MatchesPerCellMean) {
  Rng rng(3);
  const DensityMap m = oracle::random_map(rng, 480, 320);
  const GridChannel g = discretize(m);
  for (int r = 0; r < kGridRows; ++r) {
    for (int c = 0; c < kGridCols; ++c) {
      double s = 0.0;
      for (int y = 16 * r; y < 16 * r + 16; ++y)
        for (int x = 15 * c; x < 15 * c + 15; ++x) s += m(x, y);
      EXPECT_NEAR(g[cell_id(r, c)], s / 240.0, 1e-12);
    }
  }
}

TEST(Discretize, FractionalFootprints) {
  // 40 columns over 32 cells: each cell covers 1.25 pixels.
  Rng rng(4);
  const DensityMap m = oracle::random_map(rng, 40, 20);
  const GridChannel g = discretize(m);
  for (int c = 0; c < kGridCols; ++c) {
    const double lo = 1.25 * c, hi = 1.25 * (c + 1);
    double s = 0.0;
    for (int x = 0; x < 40; ++x) {
      const double cover = std::max(0.0, std::min<double>(hi, x + 1) - std::max<double>(lo, x));
      s += cover * m(x, 5);
    }
    EXPECT_NEAR(g[cell_id(5, c)], s / 1.25, 1e-12);
  }
}

TEST(LayoutChannel, WeightedFractions) {
  SegmentationMap seg(32, 20);
  seg.paint_rect(0, 0, 1, 1, Label::kImage);
  seg.paint_rect(1, 0, 2, 1, Label::kText);
  seg.paint_rect(2, 0, 3, 1, Label::kBanner);
  seg.paint_rect(3, 0, 4, 1, Label::kLogo);
  const GridChannel g = layout_channel(seg);
  EXPECT_DOUBLE_EQ(g[0], 0.5);
  EXPECT_DOUBLE_EQ(g[1], 0.35);
  EXPECT_DOUBLE_EQ(g[2], 0.15);
  EXPECT_DOUBLE_EQ(g[3], 0.0);
  EXPECT_DOUBLE_EQ(g[4], 0.0);
}

TEST(InitBelief, CopiesChannelsBitwise) {
  Rng rng(5);
  std::array<GridChannel, kNumChannels> ch;
  for (auto& g : ch) g = random_channel(rng);
  const BeliefState b = init_belief(ch);
  for (int c = 0; c < kNumChannels; ++c)
    for (int i = 0; i < kNumCells; ++i) EXPECT_TRUE(same_bits(b.channels[c][i], ch[c][i]));
  EXPECT_EQ(b.t, 0);
  EXPECT_EQ(b.visited.count(), 0u);
  const std::vector<GridChannel> five(5);
  EXPECT_THROW(init_belief(five), ValidationError);
}

TEST(InitBelief, ZeroLayoutAccepted) {
  std::array<GridChannel, kNumChannels> ch{};
  ch[0].fill(0.5);
  const BeliefState b = init_belief(ch);
  UniformPolicy p;
  ComponentChannels h{};
  RolloutOptions opt;
  opt.seed = 1;
  EXPECT_EQ(rollout(p, b, h, opt).actions.size(), 7u);
}

TEST(InitBelief, LowEqualsHigh) {
  Rng rng(6);
  BeliefInputs in;
  in.high = random_components(rng);
  in.low = in.high;
  in.layout = random_channel(rng);
  const BeliefState b = in.initial();
  for (int c = 0; c < kNumComponents; ++c) EXPECT_EQ(b.channels[c], in.high[c]);
}

TEST(Foveate, FullGridMaskGivesHigh) {
  Rng rng(7);
  const BeliefState b = random_state(rng);
  const ComponentChannels h = random_components(rng);
  const BeliefState n = foveate_update(b, 300, 100.0, h);
  for (int c = 0; c < kNumComponents; ++c) EXPECT_EQ(n.channels[c], h[c]);
  EXPECT_EQ(n.channels[kLayoutChannel], b.channels[kLayoutChannel]);
  EXPECT_EQ(n.t, 1);
  EXPECT_TRUE(n.visited.test(300));
}

TEST(Foveate, RadiusZeroTouchesOneCell) {
  Rng rng(8);
  const BeliefState b = random_state(rng);
  const ComponentChannels h = random_components(rng);
  const BeliefState n = foveate_update(b, 77, 0.0, h);
  for (int c = 0; c < kNumComponents; ++c) {
    for (int i = 0; i < kNumCells; ++i) {
      EXPECT_EQ(n.channels[c][i], i == 77 ? h[c][i] : b.channels[c][i]);
    }
  }
}

TEST(Foveate, OutsideMaskUnchangedBitwise) {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const BeliefState b = random_state(rng);
    const ComponentChannels h = random_components(rng);
    const int cell = static_cast<int>(uniform_index(rng, kNumCells));
    const BeliefState n = foveate_update(b, cell, 2.0, h);
    for (int i = 0; i < kNumCells; ++i) {
      const double dr = cell_row(i) - cell_row(cell), dc = cell_col(i) - cell_col(cell);
      const bool inside = std::sqrt(dr * dr + dc * dc) <= 2.0;
      for (int c = 0; c < kNumComponents; ++c) {
        EXPECT_TRUE(same_bits(n.channels[c][i], inside ? h[c][i] : b.channels[c][i]));
      }
      EXPECT_TRUE(same_bits(n.channels[kLayoutChannel][i], b.channels[kLayoutChannel][i]));
    }
  }
}

TEST(Foveate, IdempotentForRepeatedCell) {
  Rng rng(10);
  const BeliefState b = random_state(rng);
  const ComponentChannels h = random_components(rng);
  const BeliefState once = foveate_update(b, 200, 3.0, h);
  const BeliefState twice = foveate_update(once, 200, 3.0, h);
  EXPECT_EQ(once.channels, twice.channels);
  EXPECT_EQ(once.visited, twice.visited);
}

TEST(Foveate, CumulativeMaskBookkeeping) {
  Rng rng(11);
  BeliefState b = random_state(rng);
  const BeliefState b0 = b;
  const ComponentChannels h = random_components(rng);
  CellSet expected;
  for (int t = 0; t < 6; ++t) {
    const int cell = static_cast<int>(uniform_index(rng, kNumCells));
    b = foveate_update(b, cell, 2.5, h);
    for (int i = 0; i < kNumCells; ++i) {
      const double dr = cell_row(i) - cell_row(cell), dc = cell_col(i) - cell_col(cell);
      if (dr * dr + dc * dc <= 6.25) expected.set(i);
    }
    EXPECT_EQ(b.foveated, expected);
    for (int i = 0; i < kNumCells; ++i) {
      for (int c = 0; c < kNumComponents; ++c) {
        EXPECT_EQ(b.channels[c][i], expected.test(i) ? h[c][i] : b0.channels[c][i]);
      }
    }
  }
}

TEST(Foveate, InvalidCell) {
  BeliefState b;
  ComponentChannels h{};
  EXPECT_THROW(foveate_update(b, 640, 1.0, h), ValidationError);
  EXPECT_THROW(foveate_update(b, -1, 1.0, h), ValidationError);
  EXPECT_THROW(foveate_update(b, 0, -1.0, h), ValidationError);
}

TEST(Wta, StrictlyOrderedMapGivesTopCells) {
  Rng rng(12);
  GridChannel sal = random_channel(rng);
  std::vector<int> order(kNumCells);
  for (int i = 0; i < kNumCells; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return sal[a] > sal[b]; });
  WtaPolicy p(sal);
  BeliefState b;
  ComponentChannels h{};
  RolloutOptions opt;
  opt.length = 20;
  const Rollout r = rollout(p, b, h, opt);
  for (int t = 0; t < 20; ++t) EXPECT_EQ(r.actions[t], order[t]);
}

TEST(Wta, UniformMapVisitsInIdOrder) {
  const WtaPolicy p = wta_policy(DensityMap(64, 40, 1.0));
  BeliefState b;
  ComponentChannels h{};
  RolloutOptions opt;
  opt.length = 40;
  const Rollout r = rollout(p, b, h, opt);
  for (int t = 0; t < 40; ++t) EXPECT_EQ(r.actions[t], t);
}

TEST(Wta, RasterDecreasingMap) {
  DensityMap m(32, 20);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 32; ++x) m.at(x, y) = 1000.0 - (y * 32 + x);
  const Rollout r = rollout(wta_policy(m), BeliefState{}, ComponentChannels{}, RolloutOptions{});
  for (int t = 0; t < 7; ++t) EXPECT_EQ(r.actions[t], t);
}

TEST(Wta, MatchesArgmaxWithExclusion) {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMap m = oracle::random_map(rng, 96, 60);
    const GridChannel g = discretize(m);
    const Rollout r = rollout(wta_policy(m), BeliefState{}, ComponentChannels{}, RolloutOptions{});
    std::set<int> used;
    for (int t = 0; t < 7; ++t) {
      int best = -1;
      for (int i = 0; i < kNumCells; ++i) {
        if (used.count(i)) continue;
        if (best < 0 || g[i] > g[best]) best = i;
      }
      EXPECT_EQ(r.actions[t], best);
      used.insert(best);
    }
  }
}

TEST(Rollout, LengthLimits) {
  UniformPolicy p;
  RolloutOptions opt;
  opt.length = 641;
  EXPECT_THROW(rollout(p, BeliefState{}, ComponentChannels{}, opt), ValidationError);
  opt.length = 0;
  EXPECT_THROW(rollout(p, BeliefState{}, ComponentChannels{}, opt), ValidationError);
  opt.length = 640;
  const Rollout r = rollout(p, BeliefState{}, ComponentChannels{}, opt);
  EXPECT_EQ(std::set<int>(r.actions.begin(), r.actions.end()).size(), 640u);
}

TEST(Rollout, SameSeedSamePath) {
  Rng rng(14);
  LinearModel m;
  for (double& v : m.params) v = uniform(rng, -2.0, 2.0);
  LinearSoftmaxPolicy p(m);
  const BeliefState b = random_state(rng);
  const ComponentChannels h = random_components(rng);
  RolloutOptions opt;
  opt.seed = 99;
  opt.image_width = 640;
  opt.image_height = 400;
  const Rollout a = rollout(p, b, h, opt);
  const Rollout c = rollout(p, b, h, opt);
  EXPECT_EQ(a.actions, c.actions);
  for (std::size_t i = 0; i < a.scanpath.fixations.size(); ++i) {
    EXPECT_TRUE(same_bits(a.scanpath.fixations[i].x, c.scanpath.fixations[i].x));
    const auto [x, y] = cell_center(a.actions[i], 640, 400);
    EXPECT_EQ(a.scanpath.fixations[i].x, x);
    EXPECT_EQ(a.scanpath.fixations[i].y, y);
  }
}

TEST(Rollout, NoRepeatsAndConstantLayout) {
  Rng rng(15);
  LinearModel m;
  for (double& v : m.params) v = uniform(rng, -3.0, 3.0);
  LinearSoftmaxPolicy p(m);
  for (int trial = 0; trial < 200; ++trial) {
    const BeliefState b = random_state(rng);
    const ComponentChannels h = random_components(rng);
    RolloutOptions opt;
    opt.seed = trial;
    const Rollout r = rollout(p, b, h, opt);
    EXPECT_EQ(std::set<int>(r.actions.begin(), r.actions.end()).size(), 7u);
    EXPECT_EQ(r.final_state.channels[kLayoutChannel], b.channels[kLayoutChannel]);
    EXPECT_EQ(r.final_state.t, 7);
  }
}

TEST(Rollout, IorRadiusExcludesNeighbours) {
  UniformPolicy p;
  RolloutOptions opt;
  opt.length = 20;
  opt.ior_radius = 1.5;
  opt.seed = 3;
  const Rollout r = rollout(p, BeliefState{}, ComponentChannels{}, opt);
  for (std::size_t i = 0; i < r.actions.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const int dr = cell_row(r.actions[i]) - cell_row(r.actions[j]);
      const int dc = cell_col(r.actions[i]) - cell_col(r.actions[j]);
      EXPECT_GT(dr * dr + dc * dc, 2);
    }
  }
}

TEST(Sampling, EmpiricalFrequenciesWithinThreeSigma) {
  Rng rng(16);
  GridChannel dist{};
  // A distribution over 12 cells with very unequal mass.
  double total = 0.0;
  for (int i = 0; i < 12; ++i) {
    dist[i * 50] = 1.0 + i * i;
    total += dist[i * 50];
  }
  for (double& v : dist) v /= total;
  const int n = 100000;
  std::array<int, kNumCells> counts{};
  Rng draw(17);
  for (int k = 0; k < n; ++k) ++counts[sample_cell(dist, draw)];
  for (int i = 0; i < kNumCells; ++i) {
    const double p = dist[i];
    const double sd = std::sqrt(n * p * (1 - p));
    EXPECT_LE(std::abs(counts[i] - n * p), 3.0 * sd + 1e-9) << "cell " << i;
  }
}

TEST(Policies, DistributionsSumToOneAndMaskInhibited) {
  Rng rng(18);
  LinearModel m;
  for (double& v : m.params) v = uniform(rng, -2.0, 2.0);
  LinearSoftmaxPolicy lin(m);
  UniformPolicy uni;
  BeliefState b = random_state(rng);
  const ComponentChannels h = random_components(rng);
  for (int t = 0; t < 30; ++t) b = foveate_update(b, static_cast<int>(uniform_index(rng, kNumCells)), 2.0, h);
  for (const Policy* p : {static_cast<const Policy*>(&lin), static_cast<const Policy*>(&uni)}) {
    const GridChannel d = p->action_distribution(b);
    double s = 0.0;
    for (int i = 0; i < kNumCells; ++i) {
      s += d[i];
      if (b.inhibited.test(i)) EXPECT_EQ(d[i], 0.0);
    }
    EXPECT_NEAR(s, 1.0, 1e-9);
  }
}

TEST(Policies, RestrictToAllowed) {
  GridChannel d{};
  d[0] = 0.5;
  d[1] = 0.5;
  CellSet inh;
  inh.set(0);
  const GridChannel r = restrict_to_allowed(d, inh);
  EXPECT_EQ(r[0], 0.0);
  EXPECT_EQ(r[1], 1.0);
  inh.set(1);
  EXPECT_THROW(restrict_to_allowed(d, inh), ValidationError);
}

TEST(BeliefInputs, ChannelsNormalizedAndLowIsSmoother) {
  Rng rng(19);
  SegmentationMap seg(320, 200);
  seg.paint_rect(0, 0, 320, 30, Label::kBanner);
  seg.paint_rect(20, 50, 200, 180, Label::kText);
  std::vector<DensityMap> comps;
  for (int c = 0; c < kNumComponents; ++c) {
    DensityMap m(320, 200);
    m.at(40 + 50 * c, 100) = 1.0;
    comps.push_back(gaussian_blur(m, 5.0));
  }
  comps[3] = DensityMap(320, 200);
  const BeliefInputs in = make_belief_inputs(comps, seg);
  for (int c = 0; c < kNumComponents; ++c) {
    const double hi_max = *std::max_element(in.high[c].begin(), in.high[c].end());
    const double lo_max = *std::max_element(in.low[c].begin(), in.low[c].end());
    if (c == 3) {
      EXPECT_EQ(hi_max, 0.0);
      EXPECT_EQ(lo_max, 0.0);
      continue;
    }
    EXPECT_NEAR(hi_max, 1.0, 1e-12);
    EXPECT_NEAR(lo_max, 1.0, 1e-12);
    for (int i = 0; i < kNumCells; ++i) {
      EXPECT_GE(in.high[c][i], 0.0);
      EXPECT_GE(in.low[c][i], 0.0);
    }
    // Blurring spreads mass, so the low-resolution channel has more total.
    double hs = 0, ls = 0;
    for (int i = 0; i < kNumCells; ++i) {
      hs += in.high[c][i];
      ls += in.low[c][i];
    }
    EXPECT_GT(ls, hs);
  }
  EXPECT_EQ(in.layout, layout_channel(seg));
}

TEST(ScanpathToActions, CollapsesConsecutiveRepeats) {
  Scanpath s;
  s.fixations = {{1, 1, 100, 0}, {2, 2, 100, 1}, {30, 1, 100, 2}, {2, 1, 100, 3}};
  int collapsed = 0;
  const auto a = scanpath_to_actions(s, 320, 200, 0, &collapsed);
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a[0], 0);
  EXPECT_EQ(a[1], cell_id(0, 3));
  EXPECT_EQ(a[2], 0);
  EXPECT_EQ(collapsed, 1);
  EXPECT_EQ(scanpath_to_actions(s, 320, 200, 2).size(), 2u);
}
