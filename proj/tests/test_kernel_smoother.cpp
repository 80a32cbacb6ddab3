#include <cmath>

#include <gtest/gtest.h>

#include "cmpkit/error.hpp"
#include "cmpkit/kernel_smoother.hpp"
#include "cmpkit/mpcmp.hpp"
#include "oracles.hpp"

using namespace cmpkit;

TEST(Bandwidth, MapsToDispersion) {
  EXPECT_EQ(Bandwidth(1.0).nu_of_h(), 1.0);
  EXPECT_EQ(Bandwidth(0.01).nu_of_h(), 100.0);
  EXPECT_THROW(Bandwidth(0.0), DomainError);
  EXPECT_THROW(Bandwidth(-1.0), DomainError);
  EXPECT_THROW(Bandwidth(std::nan("")), DomainError);
}

TEST(KernelWeight, Examples) {
  EXPECT_GE(kernel_weight(3, 3, Bandwidth(1e-4)), 1.0 - 1e-6);
  for (std::int64_t y = 0; y < 15; ++y) {
    EXPECT_NEAR(kernel_weight(2, y, Bandwidth(1.0)), oracle::poisson_pmf(y, 2.0), 1e-14);
  }
  for (double h : {1e-3, 0.5, 3.0}) EXPECT_EQ(kernel_weight(0, 0, Bandwidth(h)), 1.0);
  EXPECT_THROW(kernel_weight(-1, 0, Bandwidth(1.0)), DomainError);
}

TEST(Smooth, SmallBandwidthRecoversEmpirical) {
  const CountData d({0, 0, 1, 3});
  const SmoothedPmf s = smooth(d, Bandwidth(1e-4), 3);
  ASSERT_EQ(s.estimates.size(), 4u);
  EXPECT_NEAR(s.estimates[0], 0.5, 1e-6);
  EXPECT_NEAR(s.estimates[1], 0.25, 1e-6);
  EXPECT_NEAR(s.estimates[2], 0.0, 1e-6);
  EXPECT_NEAR(s.estimates[3], 0.25, 1e-6);
  EXPECT_NEAR(s.raw_total_mass, 1.0, 1e-6);
}

TEST(Smooth, SingleObservationDefinition) {
  const SmoothedPmf s = smooth(CountData({2}), Bandwidth(1.0), 12);
  for (std::int64_t x = 0; x <= 12; ++x) {
    EXPECT_NEAR(s.estimates[x], pmf(2, MeanParams{static_cast<double>(x), 1.0}), 1e-15);
  }
  EXPECT_FALSE(s.renormalized);
}

TEST(Smooth, Renormalize) {
  const SmoothedPmf s = smooth(CountData({1, 4, 4, 6}), Bandwidth(0.7), 8, true);
  double total = 0.0;
  for (double e : s.estimates) total += e;
  EXPECT_TRUE(s.renormalized);
  EXPECT_NEAR(total, 1.0, 1e-14);
  EXPECT_GT(s.raw_total_mass, 0.0);
}

TEST(Smooth, Rejections) {
  EXPECT_THROW(smooth(CountData({1, 9}), Bandwidth(1.0), 5), DomainError);
}

TEST(SecondOrder, Examples) {
  EXPECT_LE(second_order_check(3, Bandwidth(0.1)).mean_gap, 1e-8);
  EXPECT_LE(second_order_check(3, Bandwidth(1e-3)).variance, 1e-2);
  EXPECT_NEAR(second_order_check(3, Bandwidth(1.0)).variance, 3.0, 1e-8);
}

TEST(SecondOrder, VarianceShrinksWithBandwidth) {
  for (std::int64_t x : {1, 2, 5, 12}) {
    double prev = INFINITY;
    for (double h : {1.0, 0.1, 0.01, 0.001}) {
      const KernelCheck k = second_order_check(x, Bandwidth(h));
      EXPECT_LE(k.mean_gap, 1e-8 * std::max<double>(1, x));
      EXPECT_LT(k.variance, prev) << x << ' ' << h;
      prev = k.variance;
    }
  }
}

TEST(CvBandwidth, SingletonAndTies) {
  const CountData d({1, 2, 2, 3});
  EXPECT_EQ(cv_bandwidth(d, {0.5}, 5).h(), 0.5);
  // Both bandwidths are so small the kernels are numerically point masses.
  EXPECT_EQ(cv_bandwidth(d, {2e-5, 1e-5}, 5).h(), 1e-5);
  EXPECT_THROW(cv_bandwidth(d, {}, 5), DomainError);
  EXPECT_THROW(lscv_score(CountData({1}), Bandwidth(1.0), 3), DomainError);
}

TEST(CvBandwidth, BeatsWorstGridMember) {
  const MeanParams truth{5.0, 4.0};
  const CountData d(sample(500, truth, 777));
  const std::int64_t y_max = d.max() + 5;
  const std::vector<double> grid{0.01, 0.1, 0.5, 1.0, 2.0};
  const MeanCmp true_dist(truth);
  auto ise = [&](double h) {
    const SmoothedPmf s = smooth(d, Bandwidth(h), y_max);
    double e = 0.0;
    for (std::int64_t x = 0; x <= y_max; ++x) {
      const double diff = s.estimates[x] - true_dist.pmf(x);
      e += diff * diff;
    }
    return e;
  };
  double worst = 0.0;
  for (double h : grid) worst = std::max(worst, ise(h));
  EXPECT_LT(ise(cv_bandwidth(d, grid, y_max).h()), worst);
}
