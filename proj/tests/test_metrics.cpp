#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qubonet/error.hpp"
#include "qubonet/metrics.hpp"

using namespace qubonet;

TEST(Auc, Examples) {
  const std::vector<int> y = {-1, -1, 1, 1};
  EXPECT_EQ(roc_auc(std::vector<double>{0, 1, 2, 3}, y), 1.0);
  EXPECT_EQ(roc_auc(std::vector<double>{5, 5, 5, 5}, y), 0.5);
  EXPECT_EQ(roc_auc(std::vector<double>{0.1, 0.4, 0.35, 0.8}, y), 0.75);
  EXPECT_EQ(roc_auc(std::vector<double>{3, 2, 1, 0}, y), 0.0);
}

TEST(Auc, Errors) {
  EXPECT_THROW(roc_auc(std::vector<double>{1, 2}, std::vector<int>{1, 1}), InvalidArgument);
  EXPECT_THROW(roc_auc(std::vector<double>{1}, std::vector<int>{1, -1}), InvalidArgument);
}

TEST(Auc, MatchesPairCountingOracle) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng() % 199;
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Coarse values force many ties.
      s[i] = trial % 2 ? static_cast<double>(rng() % 7) : std::uniform_real_distribution<double>(0, 1)(rng);
      y[i] = rng() & 1 ? 1 : -1;
    }
    y[0] = 1;
    y[1] = -1;
    ASSERT_NEAR(roc_auc(s, y), oracle::auc_pairs(s, y), 1e-12);
  }
}

TEST(Grid, ConstantPredictor) {
  const auto g = decision_grid([](double, double) { return 0.3; }, {}, 5);
  ASSERT_EQ(g.values.size(), 25u);
  for (double v : g.values) EXPECT_EQ(v, 0.3);
  EXPECT_EQ(g.x1.front(), -1.0);
  EXPECT_EQ(g.x1.back(), 1.0);
  EXPECT_THROW(decision_grid([](double, double) { return 0.0; }, {}, 1), InvalidArgument);
}

TEST(Grid, EvenActivationSymmetry) {
  auto f = [](double a, double b) { return a * a + b * b - 0.5; };
  const auto g = decision_grid(f, {-2, 2, -1, 1}, 21);
  for (std::size_t i = 0; i < 21; ++i)
    for (std::size_t j = 0; j < 21; ++j) EXPECT_EQ(g.at(i, j), g.at(20 - i, j));
}

TEST(Grid, PointwiseAndCsv) {
  auto f = [](double a, double b) { return a - 2 * b; };
  const auto g = decision_grid(f, {0, 1, 0, 2}, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(g.at(i, j), f(g.x1[i], g.x2[j]));
  const auto csv = grid_csv(g);
  EXPECT_EQ(csv.rfind("x1,x2,Y\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10);
}

TEST(Stats, MedianAndPercentiles) {
  std::vector<double> runs;
  for (int k = 0; k < 10; ++k) runs.push_back(0.5 + 0.05 * k);
  EXPECT_NEAR(median(runs), (0.7 + 0.75) / 2, 1e-15);
  EXPECT_EQ(percentile_nearest_rank(runs, 20), runs[1]);
  EXPECT_EQ(percentile_nearest_rank(runs, 80), runs[7]);
  EXPECT_EQ(percentile_nearest_rank(runs, 0), runs[0]);
  EXPECT_EQ(percentile_nearest_rank(runs, 100), runs[9]);
  EXPECT_EQ(median({3, 1, 2}), 2.0);
}

TEST(Compare, Report) {
  std::vector<double> runs = {0.95, 0.5, 0.9, 0.55, 0.85, 0.6, 0.8, 0.65, 0.75, 0.7};
  const auto r = compare(0.99, runs);
  EXPECT_EQ(r.quantum_auc, 0.99);
  EXPECT_EQ(r.classical_aucs.size(), 10u);
  EXPECT_NEAR(r.classical_median, 0.725, 1e-15);
  EXPECT_LE(r.classical_p20, r.classical_median);
  EXPECT_GE(r.classical_p80, r.classical_median);
  const auto one = compare(0.5, {0.7});
  EXPECT_EQ(one.classical_median, 0.7);
  EXPECT_EQ(one.classical_p20, 0.7);
  EXPECT_EQ(one.classical_p80, 0.7);
  EXPECT_THROW(compare(0.5, {}), InvalidArgument);
}

TEST(Stats, PercentilesBracketMedianProperty) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(1 + rng() % 30);
    for (auto& x : v) x = d(rng);
    const auto r = compare(0.5, v);
    ASSERT_LE(r.classical_p20, r.classical_median);
    ASSERT_GE(r.classical_p80, r.classical_median);
  }
}
