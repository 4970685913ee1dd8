#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "vdsim/error.hpp"
#include "vdsim/jpf.hpp"
#include "vdsim/verdict.hpp"

using namespace vdsim;

TEST(FactIndex, RejectsValuesOutsideUnitInterval) {
  EXPECT_NO_THROW(FactIndex(0.0));
  EXPECT_NO_THROW(FactIndex(1.0));
  EXPECT_THROW(FactIndex(-0.01), ConfigError);
  EXPECT_THROW(FactIndex(1.01), ConfigError);
  EXPECT_THROW(FactIndex(std::nan("")), ConfigError);
}

TEST(Jpf, Examples) {
  EXPECT_DOUBLE_EQ(eval_jpf(Jpf::identity(), FactIndex(0.37)), 0.37);
  for (double f : {0.0, 0.3, 1.0}) {
    EXPECT_EQ(eval_jpf(Jpf::constant(0.0), FactIndex(f)), 0.0);
    EXPECT_EQ(eval_jpf(Jpf::constant(1.0), FactIndex(f)), 1.0);
  }
  EXPECT_DOUBLE_EQ(eval_jpf(Jpf::affine(0.2, 2.0), FactIndex(0.5)), 1.0);
  EXPECT_DOUBLE_EQ(eval_jpf(Jpf::affine(-0.5, 1.0), FactIndex(0.2)), 0.0);
  EXPECT_DOUBLE_EQ(Jpf::constant(1.7)(0.4), 1.0);
}

TEST(Jpf, RejectsNegativeSlope) {
  EXPECT_THROW(Jpf::affine(0.5, -0.1), ConfigError);
  EXPECT_THROW(Jpf::affine(std::nan(""), 0.1), ConfigError);
}

TEST(Jpf, EvaluationStaysInUnitInterval) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<> a(-3.0, 3.0), b(0.0, 5.0), f(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double v = Jpf::affine(a(rng), b(rng))(f(rng));
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
  }
}

TEST(FSet, Validation) {
  EXPECT_THROW(FSet(0.6, 0.4, 11), ConfigError);
  EXPECT_THROW(FSet(-0.1, 0.4, 11), ConfigError);
  EXPECT_THROW(FSet(0.0, 1.0, 1), ConfigError);
  const auto grid = FSet(0.0, 1.0, 11).grid();
  ASSERT_EQ(grid.size(), 11u);
  EXPECT_DOUBLE_EQ(grid.front(), 0.0);
  EXPECT_DOUBLE_EQ(grid.back(), 1.0);
  EXPECT_NEAR(grid[3], 0.3, 1e-15);
}

TEST(FSeparation, Examples) {
  const FSet unit(0.0, 1.0, 101);
  const std::vector<Jpf> constants{Jpf::constant(0.2), Jpf::constant(0.8)};
  EXPECT_TRUE(is_f_separated(constants, unit));
  const std::vector<Jpf> crossing{Jpf::identity(), Jpf::constant(0.5)};
  EXPECT_FALSE(is_f_separated(crossing, unit));
  const std::vector<Jpf> parallel{Jpf::affine(0.1, 0.2), Jpf::affine(0.3, 0.2)};
  EXPECT_TRUE(is_f_separated(parallel, unit));
}

TEST(FSeparation, EmptyPoolIsAnError) {
  EXPECT_THROW(is_f_separated(std::vector<Jpf>{}, FSet(0.0, 1.0, 11)),
               ConfigError);
}

TEST(FSeparation, TiesCountAsSeparated) {
  const FSet unit(0.0, 1.0, 11);
  const std::vector<Jpf> same{Jpf::affine(0.2, 0.5), Jpf::affine(0.2, 0.5)};
  EXPECT_TRUE(is_f_separated(same, unit));
  // Equal up to F = 0.5, then one is strictly above: never reversed.
  const std::vector<Jpf> touching{Jpf::constant(0.5), Jpf::affine(0.0, 1.0)};
  EXPECT_FALSE(is_f_separated(touching, unit));
  const std::vector<Jpf> clamp_tie{Jpf::affine(0.8, 1.0), Jpf::affine(0.5, 1.0)};
  EXPECT_TRUE(is_f_separated(clamp_tie, unit));
}

TEST(FSeparation, RestrictingTheIntervalCanRestoreSeparation) {
  const std::vector<Jpf> crossing{Jpf::identity(), Jpf::constant(0.5)};
  EXPECT_TRUE(is_f_separated(crossing, FSet(0.6, 1.0, 11)));
  EXPECT_TRUE(is_f_separated(crossing, FSet(0.0, 0.5, 11)));
  EXPECT_FALSE(is_f_separated(crossing, FSet(0.4, 0.6, 11)));
}

TEST(FSeparation, AgreesWithFineGridOnRandomPools) {
  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<> a(-0.5, 1.2), b(0.0, 1.5), u(0.0, 1.0);
  std::uniform_int_distribution<int> size(2, 6);
  int separated = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<Jpf> pool;
    const int n = size(rng);
    for (int k = 0; k < n; ++k) pool.push_back(Jpf::affine(a(rng), b(rng)));
    double lo = u(rng), hi = u(rng);
    if (lo > hi) std::swap(lo, hi);
    const bool exact = is_f_separated(pool, FSet(lo, hi, 2));
    ASSERT_EQ(exact, oracle::grid_separated(pool, lo, hi, 1001))
        << "pool " << t;
    separated += exact;
  }
  // Both outcomes must actually occur for the comparison to mean anything.
  EXPECT_GT(separated, 50);
  EXPECT_LT(separated, 950);
}

TEST(FSeparation, InvariantUnderPermutation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<> a(-0.2, 1.0), b(0.0, 1.0);
  const FSet unit(0.0, 1.0, 11);
  for (int t = 0; t < 200; ++t) {
    std::vector<Jpf> pool;
    for (int k = 0; k < 5; ++k) pool.push_back(Jpf::affine(a(rng), b(rng)));
    const bool base = is_f_separated(pool, unit);
    std::shuffle(pool.begin(), pool.end(), rng);
    EXPECT_EQ(is_f_separated(pool, unit), base);
    std::reverse(pool.begin(), pool.end());
    EXPECT_EQ(is_f_separated(pool, unit), base);
  }
}

TEST(Verdict, ThresholdExamples) {
  const auto m = VerdictModel::threshold_unanimity(0.5);
  Rng rng(1);
  const std::vector<double> zeros(6, 0.0), ones(6, 1.0);
  const std::vector<double> mixed{0.6, 0.7, 0.8, 0.9, 0.6, 0.49};
  EXPECT_EQ(verdict(m, zeros, rng), 0);
  EXPECT_EQ(verdict(m, ones, rng), 1);
  EXPECT_EQ(verdict(m, mixed, rng), 0);
  EXPECT_EQ(conviction_probability(m, ones), 1.0);
  EXPECT_EQ(conviction_probability(m, mixed), 0.0);
}

TEST(Verdict, ThresholdTieConvicts) {
  const auto m = VerdictModel::threshold_unanimity(0.5);
  const std::vector<double> tie{0.5, 0.7, 0.8, 0.9, 0.6, 0.5};
  EXPECT_EQ(conviction_probability(m, tie), 1.0);
}

TEST(Verdict, ThresholdNeverTouchesRng) {
  const auto m = VerdictModel::threshold_unanimity(0.5);
  Rng rng(77);
  const Rng before = rng;
  const std::vector<double> v{0.6, 0.7, 0.8, 0.9, 0.6, 0.49};
  for (int i = 0; i < 10; ++i) verdict(m, v, rng);
  EXPECT_EQ(rng, before);
}

TEST(Verdict, LogisticExamples) {
  const std::vector<double> at_tau{0.5, 0.9, 0.8, 0.7, 0.6, 0.55};
  EXPECT_DOUBLE_EQ(
      conviction_probability(VerdictModel::smooth_logistic(2.0, 0.5), at_tau),
      0.5);
  const std::vector<double> above{0.6, 0.9, 0.8, 0.7, 0.65, 0.61};
  EXPECT_NEAR(
      conviction_probability(VerdictModel::smooth_logistic(1e6, 0.5), above),
      1.0, 1e-6);
}

TEST(Verdict, WrongJurySizeIsAnError) {
  Rng rng(3);
  const std::vector<double> five(5, 0.5), seven(7, 0.5);
  for (const auto& m : {VerdictModel::threshold_unanimity(0.5),
                        VerdictModel::smooth_logistic(4.0, 0.5),
                        VerdictModel::independent_votes(4.0, 0.5)}) {
    EXPECT_THROW(conviction_probability(m, five), ConfigError);
    EXPECT_THROW(verdict(m, seven, rng), ConfigError);
  }
}

TEST(Verdict, LogisticIncreasesInTheMinimum) {
  const auto m = VerdictModel::smooth_logistic(5.0, 0.4);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<> u(0.0, 0.95);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> v(6);
    for (auto& x : v) x = u(rng);
    const auto argmin = std::min_element(v.begin(), v.end()) - v.begin();
    const double p0 = conviction_probability(m, v);
    v[argmin] += 0.01;
    EXPECT_GT(conviction_probability(m, v), p0);
  }
}

TEST(Verdict, ThresholdWeaklyIncreasing) {
  const auto m = VerdictModel::threshold_unanimity(0.45);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<> u(0.0, 0.99);
  std::uniform_int_distribution<int> pick(0, 5);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> v(6);
    for (auto& x : v) x = u(rng);
    const double p0 = conviction_probability(m, v);
    v[pick(rng)] += 0.01;
    EXPECT_GE(conviction_probability(m, v), p0);
  }
}

TEST(Verdict, IndependentVotesStrictlyIncreasingInEveryJuror) {
  const auto m = VerdictModel::independent_votes(8.0, 0.3);
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<> u(0.0, 0.99);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> v(6);
    for (auto& x : v) x = u(rng);
    const double p0 = conviction_probability(m, v);
    for (int k = 0; k < 6; ++k) {
      auto w = v;
      w[k] += 0.01;
      EXPECT_GT(conviction_probability(m, w), p0);
    }
  }
}

TEST(Verdict, IndependentVotesIsAProductOfSigmoids) {
  const auto m = VerdictModel::independent_votes(6.0, 0.4);
  const std::vector<double> v{0.1, 0.9, 0.45, 0.3, 0.7, 0.5};
  double expected = 1.0;
  for (double x : v) expected *= 1.0 / (1.0 + std::exp(-6.0 * (x - 0.4)));
  EXPECT_NEAR(conviction_probability(m, v), expected, 1e-15);
}

TEST(Verdict, BernoulliFrequencyMatchesProbability) {
  const auto m = VerdictModel::smooth_logistic(3.0, 0.5);
  const std::vector<double> v{0.45, 0.9, 0.8, 0.7, 0.6, 0.55};
  const double p = conviction_probability(m, v);
  Rng rng(2024);
  const int n = 100000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += verdict(m, v, rng);
  EXPECT_NEAR(hits / double(n), p, 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST(Sigmoid, StableAtExtremes) {
  EXPECT_EQ(sigmoid(0.0), 0.5);
  EXPECT_EQ(sigmoid(-1e6), 0.0);
  EXPECT_EQ(sigmoid(1e6), 1.0);
  EXPECT_NEAR(sigmoid(-800.0), 0.0, 1e-300);
}
