#include "divbound/means.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "divbound/detail/numeric.hpp"
#include "divbound/prob.hpp"

namespace {

using divbound::binary_mean;
using divbound::Distribution;
using divbound::mean_chain;
using divbound::mean_divergence;
using divbound::MeanDivergenceKind;
using divbound::MeanKind;
using divbound::MeanOrder;
using divbound::power_mean;
using divbound::sample_pair;
namespace detail = divbound::detail;

Distribution std_p() { return Distribution::from_weights({0.5, 0.5}); }
Distribution std_q() { return Distribution::from_weights({0.25, 0.75}); }

TEST(PowerMean, CanonicalOrdersOnOneFour) {
  EXPECT_DOUBLE_EQ(power_mean(MeanOrder::neg_inf(), 1.0, 4.0), 1.0);
  EXPECT_DOUBLE_EQ(power_mean(-1.0, 1.0, 4.0), 1.6);
  EXPECT_DOUBLE_EQ(power_mean(0.0, 1.0, 4.0), 2.0);
  EXPECT_DOUBLE_EQ(power_mean(0.5, 1.0, 4.0), 2.25);
  EXPECT_DOUBLE_EQ(power_mean(1.0, 1.0, 4.0), 2.5);
  EXPECT_DOUBLE_EQ(power_mean(MeanOrder::pos_inf(), 1.0, 4.0), 4.0);
}

TEST(PowerMean, ExactlyIdempotent) {
  for (double t : {-5.0, -1.0, -0.25, 0.0, 0.5, 1.0, 3.0}) {
    EXPECT_DOUBLE_EQ(power_mean(t, 3.7, 3.7), 3.7) << "t = " << t;
  }
  EXPECT_DOUBLE_EQ(power_mean(MeanOrder::neg_inf(), 3.7, 3.7), 3.7);
  EXPECT_DOUBLE_EQ(power_mean(MeanOrder::pos_inf(), 3.7, 3.7), 3.7);
}

TEST(PowerMean, MonotoneInOrderAcrossScales) {
  const std::vector<std::pair<double, double>> args = {
      {1.0, 4.0}, {1e-3, 1e3}, {0.2, 0.21}, {7.0, 7.0}, {1e-6, 2.0}};
  const std::vector<double> orders = {-8.0, -2.0, -1.0, -0.5, 0.0,
                                      0.5,  1.0,  2.0,  8.0};
  for (const auto& [a, b] : args) {
    double prev = power_mean(MeanOrder::neg_inf(), a, b);
    for (double t : orders) {
      const double cur = power_mean(t, a, b);
      EXPECT_TRUE(detail::leq_tol(prev, cur, 0.0, 1e-12))
          << "t = " << t << " on (" << a << ", " << b << ")";
      prev = cur;
    }
    EXPECT_TRUE(
        detail::leq_tol(prev, power_mean(MeanOrder::pos_inf(), a, b), 0.0,
                        1e-12));
  }
}

TEST(PowerMean, NoOverflowOnExtremeScales) {
  // Factored evaluation keeps intermediate powers in (0, 1].
  const double v = power_mean(60.0, 1e-3, 1e3);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_GE(v, 1e-3);
  EXPECT_LE(v, 1e3);
  EXPECT_TRUE(std::isfinite(power_mean(-60.0, 1e-3, 1e3)));
}

TEST(PowerMean, RejectsBadArguments) {
  EXPECT_THROW(power_mean(1.0, 0.0, 2.0), std::invalid_argument);
  EXPECT_THROW(power_mean(1.0, 2.0, -1.0), std::invalid_argument);
  EXPECT_THROW(power_mean(1.0, std::nan(""), 1.0), std::invalid_argument);
}

TEST(MeanOrder, RejectsNonFiniteNumericOrder) {
  EXPECT_THROW(MeanOrder(std::numeric_limits<double>::infinity()),
               std::invalid_argument);
  EXPECT_THROW(MeanOrder(std::nan("")), std::invalid_argument);
  EXPECT_TRUE(MeanOrder::pos_inf().is_pos_inf());
  EXPECT_TRUE(MeanOrder::neg_inf().is_neg_inf());
}

TEST(BinaryMean, HandValuesOnOneFour) {
  EXPECT_DOUBLE_EQ(binary_mean(MeanKind::kHarmonic, 1.0, 4.0), 1.6);
  EXPECT_DOUBLE_EQ(binary_mean(MeanKind::kGeometric, 1.0, 4.0), 2.0);
  EXPECT_DOUBLE_EQ(binary_mean(MeanKind::kN1, 1.0, 4.0), 2.25);
  EXPECT_NEAR(binary_mean(MeanKind::kN2, 1.0, 4.0), 2.3717082451262845,
              1e-15);
  EXPECT_DOUBLE_EQ(binary_mean(MeanKind::kArithmetic, 1.0, 4.0), 2.5);
}

TEST(BinaryMean, AgreesWithPowerMeanSpecialCases) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    detail::SplitMix64 rng(seed);
    const double a = std::exp(rng.next_in(std::log(1e-3), std::log(1e3)));
    const double b = std::exp(rng.next_in(std::log(1e-3), std::log(1e3)));
    EXPECT_NEAR(binary_mean(MeanKind::kHarmonic, a, b),
                power_mean(-1.0, a, b), 1e-13 * std::max(a, b));
    EXPECT_NEAR(binary_mean(MeanKind::kGeometric, a, b),
                power_mean(0.0, a, b), 1e-13 * std::max(a, b));
    EXPECT_NEAR(binary_mean(MeanKind::kN1, a, b), power_mean(0.5, a, b),
                1e-13 * std::max(a, b));
    EXPECT_NEAR(binary_mean(MeanKind::kArithmetic, a, b),
                power_mean(1.0, a, b), 1e-13 * std::max(a, b));
  }
}

TEST(MeanChain, OrderedForRandomArguments) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    detail::SplitMix64 rng(seed);
    const double a = std::exp(rng.next_in(std::log(1e-4), std::log(1e4)));
    const double b = std::exp(rng.next_in(std::log(1e-4), std::log(1e4)));
    const auto r = mean_chain(a, b);
    EXPECT_TRUE(r.ordered) << "a=" << a << " b=" << b;
  }
}

TEST(MeanChain, EqualArgumentsCollapse) {
  const auto r = mean_chain(3.0, 3.0);
  EXPECT_DOUBLE_EQ(r.harmonic, 3.0);
  EXPECT_DOUBLE_EQ(r.geometric, 3.0);
  EXPECT_DOUBLE_EQ(r.n1, 3.0);
  EXPECT_DOUBLE_EQ(r.n2, 3.0);
  EXPECT_DOUBLE_EQ(r.arithmetic, 3.0);
  EXPECT_TRUE(r.ordered);
}

TEST(MeanDivergence, StandardPairOracles) {
  const auto p = std_p();
  const auto q = std_q();
  // Frozen against high-precision evaluation of the closed forms.
  EXPECT_NEAR(mean_divergence(MeanDivergenceKind::kAG, p, q),
              0.034074173710931713, 1e-15);
  EXPECT_NEAR(mean_divergence(MeanDivergenceKind::kAH, p, q),
              1.0 / 15.0, 1e-15);
}

TEST(MeanDivergence, VanishesOnEqualPair) {
  const auto p = Distribution::from_weights({0.2, 0.3, 0.5});
  for (auto kind :
       {MeanDivergenceKind::kAG, MeanDivergenceKind::kAH,
        MeanDivergenceKind::kAN2, MeanDivergenceKind::kN2G,
        MeanDivergenceKind::kN2N1, MeanDivergenceKind::kN1G,
        MeanDivergenceKind::kAN1}) {
    EXPECT_NEAR(mean_divergence(kind, p, p), 0.0, 1e-15);
  }
}

TEST(MeanDivergence, SymmetricInArguments) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto [p, q] = sample_pair(6, seed);
    for (auto kind :
         {MeanDivergenceKind::kAG, MeanDivergenceKind::kAH,
          MeanDivergenceKind::kAN2, MeanDivergenceKind::kN2G,
          MeanDivergenceKind::kN2N1}) {
      EXPECT_NEAR(mean_divergence(kind, p, q), mean_divergence(kind, q, p),
                  1e-15);
    }
  }
}

TEST(MeanDivergence, NonnegativeAndSizeChecked) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto [p, q] = sample_pair(9, seed);
    for (auto kind :
         {MeanDivergenceKind::kAG, MeanDivergenceKind::kAH,
          MeanDivergenceKind::kAN2, MeanDivergenceKind::kN2G,
          MeanDivergenceKind::kN2N1, MeanDivergenceKind::kN1G,
          MeanDivergenceKind::kAN1}) {
      EXPECT_GE(mean_divergence(kind, p, q), -1e-15);
    }
  }
  const auto p = Distribution::from_weights({0.5, 0.5});
  const auto q = Distribution::from_weights({0.3, 0.3, 0.4});
  EXPECT_THROW(mean_divergence(MeanDivergenceKind::kAG, p, q),
               std::invalid_argument);
}

}  // namespace
