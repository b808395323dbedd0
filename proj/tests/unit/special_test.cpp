#include <cmath>
#include <numbers>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <gtest/gtest.h>

#include <hpdwav/manifold.hpp>
#include <hpdwav/simulate.hpp>
#include <hpdwav/special.hpp>

namespace hpdwav {
namespace {

TEST(Digamma, KnownValues) {
  EXPECT_NEAR(digamma(1.0), -0.57721566490153286, 1e-15);
  EXPECT_NEAR(digamma(0.5), -0.57721566490153286 - 2.0 * std::log(2.0), 1e-14);
}

TEST(Trigamma, KnownValues) {
  EXPECT_NEAR(trigamma(1.0), std::numbers::pi * std::numbers::pi / 6.0, 1e-14);
  EXPECT_NEAR(trigamma(0.5), std::numbers::pi * std::numbers::pi / 2.0, 1e-13);
}

TEST(Trigamma, Recurrence) {
  for (double x : {0.5, 2.5}) EXPECT_NEAR(trigamma(x + 1.0), trigamma(x) - 1.0 / (x * x), 1e-13);
}

TEST(SpecialFunctions, MatchReferenceImplementation) {
  for (double x = 0.01; x < 200.0; x *= 1.37) {
    const double dg = boost::math::digamma(x);
    const double tg = boost::math::trigamma(x);
    EXPECT_LE(std::abs(digamma(x) - dg), 1e-12 * std::max(1.0, std::abs(dg))) << x;
    EXPECT_LE(std::abs(trigamma(x) - tg), 1e-12 * tg) << x;
  }
}

TEST(SpecialFunctions, RejectNonPositiveArguments) {
  EXPECT_THROW(digamma(0.0), std::invalid_argument);
  EXPECT_THROW(trigamma(-1.0), std::invalid_argument);
  EXPECT_THROW(digamma(std::nan("")), std::invalid_argument);
}

TEST(WishartTraceVariance, SmallCases) {
  EXPECT_NEAR(wishart_trace_variance(1, 1), std::numbers::pi * std::numbers::pi / 6.0, 1e-14);
  EXPECT_NEAR(wishart_trace_variance(3, 3), trigamma(1.0) + trigamma(2.0) + trigamma(3.0), 1e-14);
  EXPECT_THROW(wishart_trace_variance(3, 2), std::invalid_argument);
}

TEST(WishartBiasFactor, MatchesDigammaOracle) {
  const double sum = boost::math::digamma(2.0) + boost::math::digamma(3.0) + boost::math::digamma(4.0);
  const double expected = std::exp(std::log(4.0) - sum / 3.0);
  EXPECT_NEAR(wishart_bias_factor(3, 4), expected, 1e-10);
  EXPECT_NEAR(wishart_bias_factor(3, 4), 1.6804, 1e-4);
  EXPECT_THROW(wishart_bias_factor(4, 3), std::invalid_argument);
}

TEST(WishartTraceVariance, MatchesMonteCarlo) {
  Rng rng(21);
  const int d = 3, b = 4, reps = 5000;
  double sum = 0.0, sum_sq = 0.0;
  for (int r = 0; r < reps; ++r) {
    const double t = log_det(sample_complex_wishart(d, b, rng));
    sum += t;
    sum_sq += t * t;
  }
  const double mean = sum / reps;
  const double var = (sum_sq - reps * mean * mean) / (reps - 1);
  EXPECT_NEAR(var / wishart_trace_variance(d, b), 1.0, 0.05);
}

}  // namespace
}  // namespace hpdwav
