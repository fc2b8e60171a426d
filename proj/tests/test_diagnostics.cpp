#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "nrmcmc/diagnostics.hpp"
#include "support/oracles.hpp"

using namespace nrmcmc;

TEST(Act, WhiteNoiseIsOne) {
  const auto xs = oracle::white_noise(1'000'000, 1);
  EXPECT_NEAR(act(xs, 10).tau, 1.0, 0.02);
  EXPECT_NEAR(act(xs, 10, 0.0).tau, 1.0, 0.02);
}

TEST(Act, AutoregressiveSeries) {
  // tau = (1 + phi) / (1 - phi)
  const auto xs = oracle::ar1(1'000'000, 0.5, 2);
  const auto e = act(xs, 30);
  EXPECT_NEAR(e.tau, 3.0, 0.1);
  EXPECT_EQ(e.max_lag, 30);
  EXPECT_EQ(e.mean_source, MeanSource::Sample);
  EXPECT_FALSE(e.short_series);
}

TEST(Act, AffineInvariance) {
  const auto xs = oracle::ar1(100'000, 0.7, 3);
  std::vector<double> ys;
  for (double x : xs) ys.push_back(5.0 - 3.0 * x);
  EXPECT_NEAR(act(xs, 20).tau, act(ys, 20).tau, 1e-9);
  EXPECT_NEAR(act(xs, 20, 0.0).tau, act(ys, 20, 5.0).tau, 1e-9);
}

TEST(Act, KnownAndSampleMeanAgreeOnLongRuns) {
  const auto xs = oracle::ar1(1'000'000, 0.5, 4);
  const auto k = act(xs, 30, 0.0);
  const auto s = act(xs, 30);
  EXPECT_EQ(k.mean_source, MeanSource::Known);
  EXPECT_EQ(k.mean_used, 0.0);
  EXPECT_NEAR(k.tau, s.tau, 0.02);
}

TEST(Act, HandComputedExample) {
  // mean 0; gamma0 = 4/4, gamma1 = (-1 -1 -1)/4
  const std::vector<double> xs{1, -1, 1, -1};
  EXPECT_DOUBLE_EQ(autocovariance(xs, 0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(autocovariance(xs, 1, 0.0), -0.75);
  EXPECT_DOUBLE_EQ(act(xs, 1).tau, 1.0 + 2 * -0.75);
  EXPECT_TRUE(act(xs, 1).short_series);
}

TEST(Act, RejectsDegenerateInput) {
  const std::vector<double> flat(100, 2.0);
  EXPECT_THROW(act(flat, 5), std::invalid_argument);
  EXPECT_THROW(act(std::vector<double>{}, 5), std::invalid_argument);
  EXPECT_THROW(act(std::vector<double>{1.0, 2.0}, 0), std::invalid_argument);
}

TEST(Act, BatchStandardErrorTracksSpread) {
  const auto xs = oracle::ar1(1'000'000, 0.5, 5);
  const double se = act_batch_stderr(xs, 30, std::nullopt);
  ASSERT_TRUE(std::isfinite(se));
  // replicate taus from independent series scatter on the same scale
  std::vector<double> taus;
  for (std::uint64_t seed = 10; seed < 30; ++seed)
    taus.push_back(act(oracle::ar1(50'000, 0.5, seed), 30).tau);
  double m = 0, ss = 0;
  for (double t : taus) m += t;
  m /= taus.size();
  for (double t : taus) ss += (t - m) * (t - m);
  const double expected = std::sqrt(ss / (taus.size() - 1)) / std::sqrt(20.0);
  EXPECT_GT(se, 0.4 * expected);
  EXPECT_LT(se, 2.5 * expected);
  EXPECT_TRUE(std::isnan(act_batch_stderr(std::vector<double>(100, 1.0), 10, std::nullopt)));
}

TEST(RejectionRate, MeanOfGroupFractions) {
  EXPECT_DOUBLE_EQ(rejection_rate(std::vector<double>{0.0, 0.5, 1.0, 0.5}), 0.5);
  EXPECT_THROW(rejection_rate(std::vector<double>{}), std::invalid_argument);
}

TEST(Scalars, DeriveFromRecordedGroup) {
  const std::vector<double> x{0.2, -1.5, 1.5};
  EXPECT_EQ(derive_scalar(x, 7.0, ScalarSpec::energy()), 7.0);
  EXPECT_EQ(derive_scalar(x, 7.0, ScalarSpec::coordinate(1)), -1.5);
  EXPECT_EQ(derive_scalar(x, 7.0, ScalarSpec::indicator(-0.5, 1.5, 0)), 1.0);
  EXPECT_EQ(derive_scalar(x, 7.0, ScalarSpec::indicator(-0.5, 1.5, 2)), 0.0);
  EXPECT_EQ(derive_scalar(x, 7.0, ScalarSpec::indicator(-1.5, 0.0, 1)), 0.0);
  EXPECT_THROW(derive_scalar(x, 7.0, ScalarSpec::coordinate(3)), std::out_of_range);
}

TEST(Scalars, Labels) {
  EXPECT_EQ(ScalarSpec::energy().label(), "energy");
  EXPECT_EQ(ScalarSpec::coordinate(4).label(), "coord4");
  EXPECT_EQ(ScalarSpec::indicator(-0.5, 1.5, 0).label(), "indicator(-0.5:1.5)@0");
}
