#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "gralasso/robust_stats.hpp"
#include "oracles.hpp"

using namespace gralasso;

TEST(Median, OddEvenConstant) {
  EXPECT_EQ(median(std::vector<double>{1, 2, 3}), 2.0);
  EXPECT_EQ(median(std::vector<double>{1, 2, 3, 4}), 2.5);
  EXPECT_EQ(median(std::vector<double>{5, 5, 5}), 5.0);
  EXPECT_EQ(median(std::vector<double>{4, 1, 3, 2}), 2.5);
}

TEST(Median, EmptyAndNonFiniteRejected) {
  EXPECT_THROW(median(std::vector<double>{}), Error);
  try {
    median(std::vector<double>{});
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("empty input"), std::string::npos);
  }
  EXPECT_THROW(median(std::vector<double>{1.0, std::nan("")}), Error);
}

TEST(Median, ShiftEquivariant) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> x(1 + rep);
    for (double& v : x) v = normal(rng);
    std::vector<double> shifted = x;
    for (double& v : shifted) v += 3.25;
    EXPECT_NEAR(median(shifted), median(x) + 3.25, 1e-12);
  }
}

TEST(Qn, ConstantSampleIsZero) { EXPECT_EQ(qn_scale(std::vector<double>{7, 7, 7, 7}), 0.0); }

TEST(Qn, FiveValuesMatchEnumeration) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  // h = 3, k = 3: the ten differences sorted are 1,1,1,1,2,2,2,3,3,4
  EXPECT_DOUBLE_EQ(oracle::kth_pairwise_brute(x, 3), 1.0);
  EXPECT_DOUBLE_EQ(qn_scale(x), 2.2219 * oracle::kth_pairwise_brute(x, 3));
}

TEST(Qn, NeedsTwoObservations) {
  EXPECT_THROW(qn_scale(std::vector<double>{1.0}), Error);
  try {
    qn_scale(std::vector<double>{1.0});
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("need at least two observations"), std::string::npos);
  }
}

TEST(Qn, SelectionEqualsBruteForceUpToFifty) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> coin(0, 3);
  for (std::size_t n = 2; n <= 50; ++n) {
    for (int rep = 0; rep < 6; ++rep) {
      std::vector<double> x(n);
      for (double& v : x) v = coin(rng) == 0 ? std::round(normal(rng)) : normal(rng);  // some ties
      EXPECT_EQ(qn_scale(x), oracle::qn_brute(x)) << "n=" << n << " rep=" << rep;
    }
  }
}

TEST(Qn, EveryOrderStatisticMatchesBruteForce) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  std::vector<double> x(2100);  // large enough to exercise the bisection stage
  for (double& v : x) v = std::round(normal(rng) * 1000.0) / 100.0;
  std::vector<double> all;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) all.push_back(std::abs(x[i] - x[j]));
  }
  std::sort(all.begin(), all.end());
  for (std::size_t k : {std::size_t{1}, std::size_t{77}, all.size() / 4, all.size() / 2, all.size() - 3, all.size()}) {
    EXPECT_EQ(kth_pairwise_distance(x, k), all[k - 1]) << "k=" << k;
  }
}

TEST(Qn, AffineEquivariant) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal;
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<double> x(10 + 7 * rep);
    for (double& v : x) v = normal(rng);
    const double a = rep % 2 ? -2.5 : 0.75;
    const double c = 4.0 * rep;
    std::vector<double> t = x;
    for (double& v : t) v = a * v + c;
    EXPECT_NEAR(qn_scale(t), std::abs(a) * qn_scale(x), 1e-9 * (1.0 + std::abs(c)));
  }
}

TEST(Qn, ConsistentAtTheNormalModel) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal;
  std::vector<double> x(100000);
  for (double& v : x) v = normal(rng);
  EXPECT_NEAR(qn_scale(x), 1.0, 0.02);
}

TEST(Qn, RobustToOutliers) {
  std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const double clean = qn_scale(x);
  x[9] = 1e6;
  EXPECT_LT(qn_scale(x), 2.0 * clean);
}

TEST(Ranks, DistinctTiesAndSorted) {
  EXPECT_EQ(ranks(std::vector<double>{10, 30, 20}), (std::vector<double>{1, 3, 2}));
  EXPECT_EQ(ranks(std::vector<double>{5, 5, 1}), (std::vector<double>{2.5, 2.5, 1}));
  EXPECT_EQ(ranks(std::vector<double>{5, 5, 1}, TiePolicy::first), (std::vector<double>{2, 3, 1}));
  std::vector<double> sorted(17);
  std::iota(sorted.begin(), sorted.end(), -3.0);
  std::vector<double> expected(17);
  std::iota(expected.begin(), expected.end(), 1.0);
  EXPECT_EQ(ranks(sorted), expected);
}

TEST(Ranks, SumIsTriangularNumber) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> small(0, 5);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 1 + rep % 40;
    std::vector<double> x(n);
    for (double& v : x) v = small(rng);
    const auto r = ranks(x);
    const double sum = std::accumulate(r.begin(), r.end(), 0.0);
    EXPECT_DOUBLE_EQ(sum, n * (n + 1) / 2.0);
    for (double v : r) {
      EXPECT_GE(v, 1.0);
      EXPECT_LE(v, static_cast<double>(n));
    }
  }
}

TEST(Quantile, KnownValuesAgainstBisection) {
  EXPECT_EQ(std_normal_quantile(0.5), 0.0);
  const double frozen_975 = 1.959964;  // bisection oracle, rounded to 1e-6
  EXPECT_NEAR(oracle::normal_quantile_bisect(0.975), frozen_975, 1e-6);
  EXPECT_NEAR(std_normal_quantile(0.975), frozen_975, 1e-6);
}

TEST(Quantile, AbsoluteErrorBelow1e9) {
  std::vector<double> ps{1e-12, 1e-8, 1e-5, 0.001, 0.01, 0.02425, 0.03, 0.1, 0.25, 0.4, 0.49999, 0.5001,
                         0.6, 0.75, 0.9, 0.97, 0.97575, 0.99, 0.999, 1 - 1e-5};
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(1e-6, 1 - 1e-6);
  for (int i = 0; i < 500; ++i) ps.push_back(unif(rng));
  for (double p : ps) EXPECT_NEAR(std_normal_quantile(p), oracle::normal_quantile_bisect(p), 1e-9) << "p=" << p;
}

TEST(Quantile, Symmetric) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> unif(1e-6, 0.5);
  for (int i = 0; i < 200; ++i) {
    const double p = unif(rng);
    EXPECT_NEAR(std_normal_quantile(p), -std_normal_quantile(1.0 - p), 1e-12);
  }
}

TEST(Quantile, OutOfRange) {
  for (double p : {0.0, 1.0, -0.1, 1.5, std::nan("")}) {
    EXPECT_THROW(std_normal_quantile(p), Error);
  }
  try {
    std_normal_quantile(0.0);
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("probability out of range"), std::string::npos);
  }
}

TEST(NormalScores, MedianElementAndThreeValues) {
  const auto s = normal_scores(std::vector<double>{3.0, -1.0, 10.0, 4.0, 0.0});
  EXPECT_EQ(s[0], 0.0);  // 3.0 is the middle value
  const auto t = normal_scores(std::vector<double>{0.2, 0.1, 0.3});
  EXPECT_NEAR(t[1], oracle::normal_quantile_bisect(0.25), 1e-9);
  EXPECT_EQ(t[0], 0.0);
  EXPECT_NEAR(t[2], oracle::normal_quantile_bisect(0.75), 1e-9);
  EXPECT_DOUBLE_EQ(t[1], -t[2]);
}

TEST(NormalScores, InvariantUnderMonotoneTransforms) {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> normal;
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> x(5 + 3 * rep);
    for (double& v : x) v = normal(rng);
    std::vector<double> t = x;
    for (double& v : t) v = std::exp(2.0 * v) + std::atan(v);
    EXPECT_EQ(normal_scores(x), normal_scores(t));
  }
}

TEST(NormalScores, FiniteAndNeedTwo) {
  std::vector<double> x(1000, 1.0);
  x[0] = 0.0;
  for (double v : normal_scores(x)) EXPECT_TRUE(std::isfinite(v));
  EXPECT_THROW(normal_scores(std::vector<double>{1.0}), Error);
}
