#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mmlab/error.hpp"
#include "mmlab/moments.hpp"
#include "oracles.hpp"

using namespace mmlab;
using oracle::trade;

namespace {

std::vector<TradeRecord> hand_pair() { return {trade(0, 2, 10), trade(0, 3, 9)}; }

}  // namespace

TEST(AggregateDegree, HandOracle) {
  const auto t = hand_pair();
  EXPECT_EQ(aggregate_degree(t, 1), (DegreeSums{19, 5}));
  EXPECT_EQ(aggregate_degree(t, 2), (DegreeSums{181, 13}));
  EXPECT_EQ(aggregate_degree({}, 3), (DegreeSums{0, 0}));
}

TEST(PriceMoment, HandOracle) {
  const auto t = hand_pair();
  EXPECT_DOUBLE_EQ(*price_moment(t, 1), 3.8);
  EXPECT_DOUBLE_EQ(*price_moment(t, 2), 181.0 / 13.0);
  EXPECT_FALSE(price_moment({}, 1).has_value());
}

TEST(PriceMoment, ConstantPriceGivesPowers) {
  std::vector<TradeRecord> t;
  for (double u : {0.5, 1.5, 3.0, 7.25}) t.push_back(trade(0, u, 1.75 * u));
  for (int n = 1; n <= 6; ++n) {
    EXPECT_LE(oracle::relative(*price_moment(t, n), std::pow(1.75, n)), 1e-12) << n;
  }
  EXPECT_LE(std::abs(*frequency_mean(t) - *price_moment(t, 1)), 1e-12);
}

TEST(FrequencyMean, ContrastsWithVwap) {
  EXPECT_DOUBLE_EQ(*frequency_mean(hand_pair()), 4.0);
  const std::vector<TradeRecord> equal{trade(0, 1, 1), trade(0, 1, 3)};
  EXPECT_DOUBLE_EQ(*frequency_mean(equal), 2.0);
  EXPECT_DOUBLE_EQ(*price_moment(equal, 1), 2.0);
  EXPECT_DOUBLE_EQ(*frequency_mean(std::vector<TradeRecord>{trade(0, 4, 6)}), 1.5);
  EXPECT_FALSE(frequency_mean({}).has_value());
}

TEST(Volatility, HandOracles) {
  const auto v = volatility(std::vector<TradeRecord>{trade(0, 1, 1), trade(0, 1, 3)});
  ASSERT_TRUE(v);
  EXPECT_EQ(v->p1, 2.0);
  EXPECT_EQ(v->p2, 5.0);
  EXPECT_EQ(v->sigma2, 1.0);
  EXPECT_TRUE(v->measure_valid);

  const auto bad = volatility(hand_pair());
  ASSERT_TRUE(bad);
  EXPECT_NEAR(bad->sigma2, 181.0 / 13.0 - 14.44, 1e-12);
  EXPECT_NEAR(bad->sigma2, -0.516923, 1e-6);
  EXPECT_FALSE(bad->measure_valid);
  EXPECT_EQ(bad->sigma2, bad->p2 - bad->p1 * bad->p1);

  EXPECT_FALSE(volatility(std::vector<TradeRecord>{}).has_value());
}

TEST(Volatility, ConstantPriceIsZero) {
  std::vector<TradeRecord> t;
  for (double u : {0.3, 1.0, 2.5, 9.0}) t.push_back(trade(0, u, 3.2 * u));
  const auto v = volatility(t);
  EXPECT_LE(std::abs(v->sigma2), 1e-12);
  EXPECT_TRUE(v->measure_valid);
}

TEST(CharFunction, Cases) {
  const auto t = hand_pair();
  const MomentSeries ms = compute_moments(t, {}, 2);
  EXPECT_EQ(char_function(ms, 0.0, 2), std::complex<double>(1.0, 0.0));
  const double x = 0.7;
  const auto f2 = char_function(ms, x, 2);
  EXPECT_NEAR(f2.real(), 1.0 - *ms.moment(2) * x * x / 2, 1e-14);
  EXPECT_NEAR(f2.imag(), *ms.moment(1) * x, 1e-14);

  const std::vector<TradeRecord> flat{trade(0, 1, 2), trade(0, 1, 2)};
  const MomentSeries big = compute_moments(flat, {}, 50);
  const auto f = char_function(big, 0.5, 50);
  EXPECT_LT(std::abs(f - std::exp(std::complex<double>(0.0, 1.0))), 1e-12);

  EXPECT_THROW(char_function(ms, 1.0, 3), DomainError);
  EXPECT_THROW(char_function(compute_moments({}, {}, 2), 1.0, 1), DomainError);
}

TEST(MomentValidity, HankelCases) {
  EXPECT_TRUE(moment_validity(std::vector<double>{2, 5}, 2));
  EXPECT_FALSE(moment_validity(std::vector<double>{3.8, 181.0 / 13.0}, 2));
  EXPECT_TRUE(moment_validity(std::vector<double>{3, 9}, 2));
  EXPECT_NEAR(hankel_min_eigenvalue(std::vector<double>{3, 9}, 2), 0.0, 1e-12);
  // Moments of the two-point measure {1, 3} with equal weights up to degree 4.
  EXPECT_TRUE(moment_validity(std::vector<double>{2, 5, 14, 41}, 4));
  EXPECT_THROW(moment_validity(std::vector<double>{2}, 2), DomainError);
}

TEST(MomentSeries, WindowCountAndAnchoring) {
  std::vector<TradeRecord> t;
  for (int i = 0; i <= 10; ++i) t.push_back(trade(i, 1, 1));
  const Ledger l(1, 1, t);
  const auto windows = rolling_windows(l, 1.0, 1.0);
  ASSERT_EQ(windows.size(), 11u);
  EXPECT_EQ(windows.front().center, 0.5);
  EXPECT_EQ(windows.back().center, 10.5);
  EXPECT_TRUE(rolling_windows(Ledger(1, 1), 1.0, 1.0).empty());
  EXPECT_THROW(moment_series(l, 1.0, 1.0, 13), ConfigError);
  EXPECT_THROW(moment_series(l, 0.0, 1.0, 2), ConfigError);
}

TEST(MomentSeries, EqualsOneShotAndPartitions) {
  std::mt19937_64 rng(5);
  const Ledger l(1, 1, oracle::random_trades(rng, 3000, 1, 1, 20.0));
  const auto series = moment_series(l, 1.5, 1.5, 6);
  std::size_t counted = 0;
  for (const auto& ms : series) {
    const auto sel = window_select(l, ms.window);
    EXPECT_EQ(ms, compute_moments(sel, ms.window, 6));
    counted += ms.trade_count;
    for (int n = 1; n <= 6; ++n) {
      const auto direct = price_moment(sel, n);
      EXPECT_EQ(ms.moment(n), direct);
    }
  }
  EXPECT_EQ(counted, l.size());

  // Overlapping windows still agree with one-shot evaluation.
  for (const auto& ms : moment_series(l, 2.0, 0.5, 3)) {
    EXPECT_EQ(ms, compute_moments(window_select(l, ms.window), ms.window, 3));
  }
}

TEST(MomentSeries, SumsMatchLongDoubleOracle) {
  std::mt19937_64 rng(8);
  const auto t = oracle::random_trades(rng, 5000, 1, 1, 1.0);
  const MomentSeries ms = compute_moments(t, {}, 6);
  for (int n = 1; n <= 6; ++n) {
    const auto s = oracle::degree_sums(t, n);
    EXPECT_LE(oracle::relative(ms.sum(n).value_sum, static_cast<double>(s.value)), 1e-13);
    EXPECT_LE(oracle::relative(ms.sum(n).volume_sum, static_cast<double>(s.volume)), 1e-13);
    EXPECT_LE(oracle::relative(*ms.moment(n) * ms.sum(n).volume_sum, ms.sum(n).value_sum), 1e-12);
  }
}

TEST(MomentSeries, ScaleAndOrderInvariance) {
  std::mt19937_64 rng(9);
  auto t = oracle::random_trades(rng, 500, 1, 1, 1.0);
  const MomentSeries base = compute_moments(t, {}, 4);
  auto scaled = t;
  for (auto& r : scaled) r.value *= 2.5;
  const MomentSeries s = compute_moments(scaled, {}, 4);
  for (int n = 1; n <= 4; ++n) {
    EXPECT_LE(oracle::relative(*s.moment(n), *base.moment(n) * std::pow(2.5, n)), 1e-12);
  }
  std::shuffle(t.begin(), t.end(), rng);
  const MomentSeries shuffled = compute_moments(t, {}, 4);
  for (int n = 1; n <= 4; ++n) EXPECT_LE(oracle::relative(*shuffled.moment(n), *base.moment(n)), 1e-12);
}

TEST(MomentCsv, Formats) {
  const Ledger l(1, 1, hand_pair());
  const auto series = moment_series(l, 1.0, 1.0, 2);
  EXPECT_EQ(volatility_csv(series), "t,p1,p2,sigma2,valid\n0.5,3.8,13.923076923076923,-0.5169230769230762,false\n");
  EXPECT_EQ(moments_csv(series), "t,n,C_n,U_n,p_n\n0.5,1,19,5,3.8\n0.5,2,181,13,13.923076923076923\n");
}
