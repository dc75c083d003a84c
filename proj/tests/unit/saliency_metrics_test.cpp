#include "gazedoc/saliency_metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "gazedoc/density.hpp"
#include "gazedoc/error.hpp"
#include "gazedoc/rng.hpp"
#include "oracles.hpp"

using namespace gazedoc;

namespace {

DensityMap affine(const DensityMap& m, double a, double b) {
  std::vector<double> v(m.values().begin(), m.values().end());
  for (double& x : v) x = a * x + b;
  return DensityMap(m.width(), m.height(), std::move(v));
}

Fixation at(double x, double y) { return Fixation{x, y, 200.0, 0}; }

}  // namespace

TEST(SaliencyOracles, RandomInstances) {
  Rng rng(101);
  for (int trial = 0; trial < 150; ++trial) {
    const DensityMap m = oracle::random_map(rng, 8, 8);
    const DensityMap o = oracle::random_map(rng, 8, 8);
    const auto fix = oracle::random_fixations(rng, 7, 8, 8);
    const auto shuf = oracle::random_fixations(rng, 20, 8, 8);
    EXPECT_NEAR(nss(m, fix), oracle::nss(m, fix), 1e-9);
    EXPECT_NEAR(cc(m, o), oracle::cc(m, o), 1e-9);
    const DensityMap p = normalized(m), q = normalized(o);
    EXPECT_NEAR(kl_divergence(p, q), oracle::kl(p, q, kKlEpsilon), 1e-9);
    EXPECT_NEAR(auc_judd(m, fix), oracle::auc_judd(m, fix), 1e-9);
    EXPECT_NEAR(auc_shuffled(m, fix, shuf), oracle::sauc(m, fix, shuf), 1e-9);
  }
}

TEST(Nss, HalfHalfBinaryMap) {
  std::vector<double> v(16, 0.0);
  for (int i = 0; i < 8; ++i) v[i] = 1.0;
  const DensityMap m(4, 4, v);
  const std::vector<Fixation> fix{at(0, 0), at(3, 1)};
  EXPECT_NEAR(nss(m, fix), 1.0, 1e-12);
}

TEST(Nss, ConstantMapUndefined) {
  const std::vector<Fixation> fix{at(1, 1)};
  try {
    nss(DensityMap(5, 5, 0.2), fix);
    FAIL() << "expected an error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("NSS undefined"), std::string::npos);
  }
}

TEST(Nss, UniformFixationsAverageToZero) {
  Rng rng(103);
  const DensityMap m = oracle::random_map(rng, 16, 16);
  double sum = 0.0, sq = 0.0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    const std::vector<Fixation> f{at(static_cast<double>(uniform_index(rng, 16)),
                                     static_cast<double>(uniform_index(rng, 16)))};
    const double s = nss(m, f);
    sum += s;
    sq += s * s;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sq / draws - mean * mean) / draws);
  EXPECT_LT(std::abs(mean), 3.0 * se + 1e-12);
}

TEST(Cc, IdentityAndErrors) {
  Rng rng(104);
  const DensityMap m = oracle::random_map(rng, 8, 8);
  EXPECT_NEAR(cc(m, m), 1.0, 1e-12);
  EXPECT_THROW(cc(m, DensityMap(8, 8, 1.0)), ValidationError);
  EXPECT_THROW(cc(m, DensityMap(4, 8, 1.0)), ValidationError);
}

TEST(Kl, IdentityNonNegativeAndRequiresNormalized) {
  Rng rng(105);
  for (int t = 0; t < 20; ++t) {
    const DensityMap p = normalized(oracle::random_map(rng, 6, 6));
    const DensityMap q = normalized(oracle::random_map(rng, 6, 6));
    EXPECT_EQ(kl_divergence(p, p), 0.0);
    EXPECT_GE(kl_divergence(p, q), 0.0);
  }
  const DensityMap p = normalized(oracle::random_map(rng, 6, 6));
  EXPECT_THROW(kl_divergence(DensityMap(6, 6, 1.0), p), ValidationError);
  EXPECT_THROW(kl_divergence(p, DensityMap(6, 6, 1.0)), ValidationError);
}

TEST(AucJudd, IndicatorAndConstant) {
  Rng rng(106);
  for (int t = 0; t < 20; ++t) {
    const auto fix = oracle::random_fixations(rng, 5, 10, 10);
    DensityMap ind(10, 10, 0.0);
    for (const Fixation& f : fix) ind.at(pixel_column(f.x, 10), pixel_row(f.y, 10)) = 1.0;
    EXPECT_NEAR(auc_judd(ind, fix), 1.0, 1e-12);
    EXPECT_EQ(auc_judd(DensityMap(10, 10, 0.3), fix), 0.5);
  }
}

TEST(AucShuffled, SeparatedNegativesAndCoincidentDrops) {
  std::vector<double> v(25, 0.0);
  v[12] = 1.0;
  const DensityMap m(5, 5, v);
  const std::vector<Fixation> fix{at(2, 2)};
  const std::vector<Fixation> shuf{at(0, 0), at(4, 4), at(2, 2), at(9, 9)};
  EXPECT_EQ(auc_shuffled(m, fix, shuf), 1.0);
  const std::vector<Fixation> only_coincident{at(2, 2)};
  EXPECT_THROW(auc_shuffled(m, fix, only_coincident), ValidationError);
}

TEST(Metrics, AffineInvariance) {
  Rng rng(107);
  for (int trial = 0; trial < 200; ++trial) {
    const DensityMap m = oracle::random_map(rng, 8, 8);
    const DensityMap o = oracle::random_map(rng, 8, 8);
    const auto fix = oracle::random_fixations(rng, 7, 8, 8);
    const auto shuf = oracle::random_fixations(rng, 20, 8, 8);
    const double a = uniform(rng, 0.1, 10.0), b = uniform(rng, 0.0, 5.0);
    const DensityMap t = affine(m, a, b);
    EXPECT_NEAR(nss(t, fix), nss(m, fix), 1e-9);
    EXPECT_NEAR(cc(t, o), cc(m, o), 1e-9);
    EXPECT_NEAR(auc_judd(t, fix), auc_judd(m, fix), 1e-9);
    EXPECT_NEAR(auc_shuffled(t, fix, shuf), auc_shuffled(m, fix, shuf), 1e-9);
  }
}

TEST(LTotal, ImpulseHasSmallestNssTerm) {
  Rng rng(108);
  const std::vector<Fixation> fix{at(6, 3)};
  DensityMap impulse(12, 8, 0.0);
  impulse.at(6, 3) = 1.0;
  const double best = kLambdaNss / nss(impulse, fix);
  for (int t = 0; t < 30; ++t) {
    DensityMap cand = oracle::random_map(rng, 12, 8);
    if (t % 2) cand = gaussian_blur(impulse, 0.5 + t * 0.1);
    const double s = nss(cand, fix);
    if (s > 0.0) EXPECT_LE(best, kLambdaNss / s + 1e-12);
    EXPECT_LE(s, nss(impulse, fix) + 1e-12);
  }
  const double expected = kLambdaTv * total_variation(normalized(impulse)) + best;
  EXPECT_NEAR(l_total(impulse, fix), expected, 1e-12);
}

TEST(LTotal, Errors) {
  const std::vector<Fixation> fix{at(1, 1)};
  EXPECT_THROW(l_total(DensityMap(4, 4, 0.5), fix), ValidationError);
  // Fixation on the minimum of the map gives a negative NSS.
  std::vector<double> v(16, 1.0);
  v[5] = 0.0;
  EXPECT_THROW(l_total(DensityMap(4, 4, v), fix), ValidationError);
}

TEST(ShuffleSample, CapAndDeterminism) {
  Rng rng(109);
  const auto pool = oracle::random_fixations(rng, 500, 50, 50);
  const auto a = sample_shuffle_fixations(pool, 7, 3);
  const auto b = sample_shuffle_fixations(pool, 7, 3);
  EXPECT_EQ(a.size(), 70u);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_EQ(a[i].y, b[i].y);
  }
  EXPECT_EQ(sample_shuffle_fixations(pool, 100, 3).size(), 500u);
  EXPECT_EQ(sample_shuffle_fixations(pool, 7, 3, 2).size(), 14u);
}
