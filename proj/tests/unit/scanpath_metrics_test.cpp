#include "gazedoc/scanpath_metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "gazedoc/error.hpp"
#include "gazedoc/rng.hpp"
#include "oracles.hpp"

using namespace gazedoc;

namespace {

Scanpath path_through(const std::vector<Point2>& pts, const std::string& subject = "s") {
  Scanpath s;
  s.image_id = "img";
  s.subject_id = subject;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    s.fixations.push_back(Fixation{pts[i].x, pts[i].y, 250.0, static_cast<int>(i)});
  }
  return s;
}

const std::vector<Point2> kCorners{{100, 100}, {700, 100}, {700, 500}, {100, 500}};

Scanpath by_letters(const std::string& letters, const std::string& subject = "s") {
  std::vector<Point2> pts;
  for (char c : letters) pts.push_back(kCorners[c - 'A']);
  return path_through(pts, subject);
}

}  // namespace

TEST(SequenceScore, DroppedLetter) {
  const FixationClusterer cl(kCorners);
  EXPECT_DOUBLE_EQ(sequence_score(by_letters("ABCD"), by_letters("ABD"), cl), 0.75);
  EXPECT_DOUBLE_EQ(sequence_score(by_letters("ABD"), by_letters("ABCD"), cl), 0.75);
}

TEST(SequenceScore, IdentityAndDisjoint) {
  const FixationClusterer cl(kCorners);
  EXPECT_EQ(sequence_score(by_letters("ABCDA"), by_letters("ABCDA"), cl), 1.0);
  EXPECT_EQ(sequence_score(by_letters("AB"), by_letters("CD"), cl), 0.0);
  EXPECT_THROW(sequence_score(Scanpath{}, by_letters("A"), cl), ValidationError);
}

TEST(SequenceScore, MatchesSubsequenceEnumeration) {
  Rng rng(201);
  std::vector<Point2> centers;
  for (int i = 0; i < 5; ++i) centers.push_back({uniform(rng, 0, 800), uniform(rng, 0, 600)});
  const FixationClusterer cl(centers);
  for (int trial = 0; trial < 200; ++trial) {
    const int na = 1 + static_cast<int>(uniform_index(rng, 9));
    const int nb = 1 + static_cast<int>(uniform_index(rng, 9));
    const Scanpath a = oracle::random_scanpath(rng, na, 800, 600);
    const Scanpath b = oracle::random_scanpath(rng, nb, 800, 600);
    auto ids = [&](const Scanpath& s) {
      std::vector<int> out;
      for (int i = 0; i < std::min<int>(7, s.fixations.size()); ++i) {
        const Fixation& f = s.fixations[i];
        int best = 0;
        for (int c = 1; c < 5; ++c) {
          if (std::hypot(f.x - centers[c].x, f.y - centers[c].y) <
              std::hypot(f.x - centers[best].x, f.y - centers[best].y))
            best = c;
        }
        out.push_back(best);
      }
      return out;
    };
    const auto ia = ids(a), ib = ids(b);
    const double expect = static_cast<double>(oracle::lcs_enumerated(ia, ib)) /
                          std::max(ia.size(), ib.size());
    EXPECT_NEAR(sequence_score(a, b, cl), expect, 1e-12);
  }
}

TEST(NeedlemanWunsch, MatchesTableRecursion) {
  Rng rng(202);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> a(uniform_index(rng, 8)), b(uniform_index(rng, 8));
    for (int& x : a) x = static_cast<int>(uniform_index(rng, 3));
    for (int& x : b) x = static_cast<int>(uniform_index(rng, 3));
    const AlignmentScoring sc{2.0, -1.0, -0.5};
    EXPECT_NEAR(needleman_wunsch(a, b, sc), oracle::alignment(a, b, 2.0, -1.0, -0.5), 1e-12);
  }
}

TEST(SequenceScore, TruncatesToSeven) {
  const FixationClusterer cl(kCorners);
  EXPECT_EQ(sequence_score(by_letters("ABCDABCAAA"), by_letters("ABCDABCDDD"), cl), 1.0);
  EXPECT_LT(sequence_score(by_letters("ABCDABCAAA"), by_letters("ABCDABCDDD"), cl, 0), 1.0);
}

TEST(Clusterer, MeanShiftFindsSeparatedGroups) {
  Rng rng(203);
  std::vector<Point2> pts;
  const std::vector<Point2> truth{{100, 100}, {600, 120}, {350, 450}};
  for (const Point2& c : truth) {
    for (int i = 0; i < 30; ++i) pts.push_back({c.x + 15 * standard_normal(rng), c.y + 15 * standard_normal(rng)});
  }
  const FixationClusterer cl = FixationClusterer::fit(pts, 100.0);
  ASSERT_EQ(cl.centers().size(), 3u);
  for (const Point2& c : truth) {
    const int l = cl.label(c.x, c.y);
    EXPECT_LT(std::hypot(cl.centers()[l].x - c.x, cl.centers()[l].y - c.y), 10.0);
  }
  EXPECT_EQ(cl.label(100, 100), cl.label(120, 90));
  EXPECT_NE(cl.label(100, 100), cl.label(600, 120));
  EXPECT_THROW(FixationClusterer::fit(std::vector<Point2>{}, 100.0), ValidationError);
  EXPECT_THROW(FixationClusterer().label(0, 0), ValidationError);
}

TEST(Clusterer, LabelTiesGoToLowestIndex) {
  const FixationClusterer cl(std::vector<Point2>{{0, 0}, {10, 0}});
  EXPECT_EQ(cl.label(5, 0), 0);
  EXPECT_EQ(cl.label(5.001, 0), 1);
}

TEST(MinCostPath, MatchesEnumeration) {
  Rng rng(204);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(uniform_index(rng, 6));
    const int m = 1 + static_cast<int>(uniform_index(rng, 6));
    std::vector<std::vector<double>> c(n, std::vector<double>(m));
    for (auto& row : c)
      for (double& v : row) v = uniform01(rng);
    EXPECT_EQ(min_cost_path(c), oracle::cheapest_path(c));
  }
}

TEST(MinCostPath, ConstantCostTakesDiagonal) {
  const std::vector<std::vector<double>> c(4, std::vector<double>(4, 1.0));
  const auto p = min_cost_path(c);
  ASSERT_EQ(p.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(p[i], std::make_pair(i, i));
}

TEST(MultiMatch, MatchesExhaustiveOracle) {
  Rng rng(205);
  for (int trial = 0; trial < 150; ++trial) {
    const Scanpath a = oracle::random_scanpath(rng, 1 + static_cast<int>(uniform_index(rng, 7)), 640, 400);
    const Scanpath b = oracle::random_scanpath(rng, 1 + static_cast<int>(uniform_index(rng, 7)), 640, 400);
    const MultiMatchResult r = multimatch(a, b, 640, 400);
    const oracle::MultiMatch o = oracle::multimatch(a, b, 640, 400);
    ASSERT_EQ(r.shape.has_value(), o.shape.has_value());
    if (o.shape) {
      EXPECT_NEAR(*r.shape, *o.shape, 1e-9);
      EXPECT_NEAR(*r.direction, *o.direction, 1e-9);
      EXPECT_NEAR(*r.length, *o.length, 1e-9);
    }
    EXPECT_NEAR(r.position, o.position, 1e-9);
  }
}

TEST(MultiMatch, IdentityAndTranslation) {
  Rng rng(206);
  for (int trial = 0; trial < 50; ++trial) {
    const Scanpath a = oracle::random_scanpath(rng, 7, 500, 300);
    const MultiMatchResult id = multimatch(a, a, 1000, 600);
    EXPECT_NEAR(*id.shape, 1.0, 1e-12);
    EXPECT_NEAR(*id.direction, 1.0, 1e-12);
    EXPECT_NEAR(*id.length, 1.0, 1e-12);
    EXPECT_NEAR(id.position, 1.0, 1e-12);
    Scanpath b = a;
    const double dx = uniform(rng, 0, 400), dy = uniform(rng, 0, 250);
    for (Fixation& f : b.fixations) {
      f.x += dx;
      f.y += dy;
    }
    const MultiMatchResult t = multimatch(a, b, 1000, 600);
    EXPECT_NEAR(*t.shape, 1.0, 1e-9);
    EXPECT_NEAR(*t.direction, 1.0, 1e-6);
    EXPECT_NEAR(*t.length, 1.0, 1e-9);
    EXPECT_NEAR(t.position, 1.0 - std::hypot(dx, dy) / std::hypot(1000.0, 600.0), 1e-9);
  }
}

TEST(MultiMatch, SymmetricAndSingleFixation) {
  Rng rng(207);
  for (int trial = 0; trial < 50; ++trial) {
    const Scanpath a = oracle::random_scanpath(rng, 6, 640, 400);
    const Scanpath b = oracle::random_scanpath(rng, 5, 640, 400);
    const auto ab = multimatch(a, b, 640, 400), ba = multimatch(b, a, 640, 400);
    EXPECT_NEAR(*ab.shape, *ba.shape, 1e-12);
    EXPECT_NEAR(*ab.direction, *ba.direction, 1e-12);
    EXPECT_NEAR(*ab.length, *ba.length, 1e-12);
    EXPECT_NEAR(ab.position, ba.position, 1e-12);
  }
  const Scanpath one = path_through({{10, 10}});
  const Scanpath two = path_through({{10, 10}, {50, 50}});
  const auto r = multimatch(one, two, 100, 100);
  EXPECT_FALSE(r.shape.has_value());
  EXPECT_FALSE(r.direction.has_value());
  // The path pairs the lone fixation with both others; the median distance is half
  // of the second one.
  EXPECT_NEAR(r.position, 1.0 - 0.5 * std::hypot(40.0, 40.0) / std::hypot(100.0, 100.0), 1e-12);
}

TEST(InterObserver, IdenticalSubjectsScoreOne) {
  ImageScanpaths img{"img", 800, 600, {by_letters("ABCDB", "s1"), by_letters("ABCDB", "s2")}};
  const auto r = inter_observer(std::span<const ImageScanpaths>(&img, 1));
  EXPECT_EQ(r.per_image.at("img").sequence_score, 1.0);
  EXPECT_NEAR(r.per_image.at("img").shape, 1.0, 1e-12);
  EXPECT_EQ(r.per_image.at("img").pairs, 2);
  EXPECT_EQ(r.aggregate.sequence_score, 1.0);
}

TEST(InterObserver, TwoSubjectToyAndSkips) {
  std::vector<ImageScanpaths> imgs{
      {"a", 800, 600, {by_letters("ABCD", "s1"), by_letters("ABD", "s2")}},
      {"b", 800, 600, {by_letters("ABC", "s1")}},
      {"c", 800, 600, {by_letters("AB", "s1"), by_letters("AB", "s2")}}};
  const auto r = inter_observer(imgs);
  EXPECT_DOUBLE_EQ(r.per_image.at("a").sequence_score, 0.75);
  EXPECT_EQ(r.per_image.count("b"), 0u);
  ASSERT_EQ(r.skipped_images.size(), 1u);
  EXPECT_EQ(r.skipped_images[0], "b");
  EXPECT_DOUBLE_EQ(r.aggregate.sequence_score, (0.75 + 1.0) / 2.0);
}

TEST(ScoreAgainstHumans, MeanOverHumans) {
  const ImageScanpaths humans{"img", 800, 600, {by_letters("ABCD", "h1"), by_letters("ABCD", "h2")}};
  const std::vector<Scanpath> pred{by_letters("ABD", "m")};
  const ScanpathScores s = score_against_humans(pred, humans);
  EXPECT_DOUBLE_EQ(s.sequence_score, 0.75);
  EXPECT_EQ(s.pairs, 2);
}
