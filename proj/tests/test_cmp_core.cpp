#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "cmpkit/cmp_core.hpp"
#include "cmpkit/error.hpp"
#include "oracles.hpp"

using namespace cmpkit;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST(Validate, DomainAndDivergence) {
  EXPECT_NO_THROW(validate(CmpParams{0.3, 2.0}));
  EXPECT_NO_THROW(validate(CmpParams{-kInf, 0.0}));
  EXPECT_THROW(validate(CmpParams{0.0, -1.0}), DomainError);
  EXPECT_THROW(validate(CmpParams{std::nan(""), 1.0}), DomainError);
  EXPECT_THROW(validate(CmpParams{kInf, 1.0}), DomainError);
  EXPECT_THROW(validate(CmpParams{0.0, 0.0}), DivergentSeriesError);
  EXPECT_THROW(validate(CmpParams{0.1, 0.0}), DivergentSeriesError);
  EXPECT_THROW(log_normalizer(CmpParams{0.0, 0.0}), DivergentSeriesError);
}

TEST(TruncationWindow, ZeroRate) {
  EXPECT_EQ(truncation_window(CmpParams{-kInf, 3.0}), 0);
  EXPECT_EQ(truncation_window(CmpParams{-kInf, 0.0}), 0);
}

TEST(TruncationWindow, PoissonTailBelowTolerance) {
  const std::int64_t hi = truncation_window(CmpParams{std::log(2.0), 1.0}, 1e-12);
  EXPECT_GE(hi, 2);
  long double tail = 0.0L;
  for (std::int64_t y = hi + 1; y < hi + 200; ++y) tail += oracle::poisson_pmf(y, 2.0);
  EXPECT_LT(tail, 1e-12);
}

TEST(TruncationWindow, SharpDistributionStaysSmall) {
  const std::int64_t hi = truncation_window(CmpParams{100.0 * std::log(4.5), 100.0});
  EXPECT_GE(hi, 4);
  EXPECT_LE(hi, 50);
}

TEST(TruncationWindow, RejectsBadTolerance) {
  EXPECT_THROW(truncation_window(CmpParams{0.0, 1.0}, 0.0), DomainError);
  EXPECT_THROW(truncation_window(CmpParams{0.0, 1.0}, 1.0), DomainError);
}

TEST(LogNormalizer, ClosedForms) {
  for (double lambda : {0.01, 0.5, 2.0, 37.5}) {
    EXPECT_NEAR(log_normalizer(CmpParams{std::log(lambda), 1.0}), lambda,
                1e-13 * std::max(1.0, lambda));
  }
  EXPECT_NEAR(log_normalizer(CmpParams{std::log(0.5), 0.0}), std::log(2.0), 1e-13);
  EXPECT_NEAR(log_normalizer(CmpParams{std::log(0.99), 0.0}), std::log(100.0), 1e-11);
}

TEST(LogNormalizer, DirectSummationOracle) {
  const double want = oracle::cmp_log_normalizer(std::log(3.0), 2.0, 50);
  // Hand sum of 3^y/(y!)^2 through y = 8: 1 + 3 + 2.25 + 0.75 + 0.140625 + ...
  EXPECT_NEAR(std::exp(want), 7.158996, 1e-6);
  EXPECT_NEAR(log_normalizer(CmpParams{std::log(3.0), 2.0}), want, 1e-13);
  for (double nu : {0.3, 0.7, 1.5, 4.0, 25.0}) {
    for (double eta : {-3.0, -0.2, 0.4, 2.0, 7.0}) {
      if (eta > 6.0 * nu) continue;  // keeps the mode inside the oracle's range
      EXPECT_NEAR(log_normalizer(CmpParams{eta, nu}),
                  oracle::cmp_log_normalizer(eta, nu, 4000), 1e-12 * std::max(1.0, eta))
          << eta << ' ' << nu;
    }
  }
}

TEST(LogPmf, Examples) {
  const CmpParams p{std::log(2.0), 1.0};
  EXPECT_NEAR(log_pmf(0, p), -log_normalizer(p), 1e-15);
  EXPECT_NEAR(log_pmf(3, p), 3 * std::log(2.0) - std::log(6.0) - 2.0, 1e-14);
  EXPECT_EQ(log_pmf(0, CmpParams{-kInf, 2.0}), 0.0);
  EXPECT_EQ(log_pmf(1, CmpParams{-kInf, 2.0}), -kInf);
  EXPECT_THROW(log_pmf(-1, p), DomainError);
}

TEST(LogPmf, BeyondWindowKeepsDecaying) {
  const CmpParams p{std::log(2.0), 1.0};
  const std::int64_t hi = truncation_window(p);
  EXPECT_NEAR(log_pmf(hi + 40, p), std::log(oracle::poisson_pmf(hi + 40, 2.0)), 1e-9);
  EXPECT_LT(log_pmf(hi + 41, p), log_pmf(hi + 40, p));
}

TEST(PmfTable, ZeroRateIsPointMass) {
  const PmfTable t = pmf_table(CmpParams{-kInf, 5.0});
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t.prob(0), 1.0);
  EXPECT_EQ(t.prob(1), 0.0);
}

TEST(PmfTable, PoissonEmbedding) {
  for (double lambda : {0.3, 2.0, 15.0, 240.0}) {
    const PmfTable t = pmf_table(CmpParams{std::log(lambda), 1.0}, 1e-12);
    for (std::int64_t y = 0; y <= t.y_hi; ++y) {
      ASSERT_NEAR(t.prob(y), oracle::poisson_pmf(y, lambda), 1e-12) << lambda << ' ' << y;
    }
  }
}

TEST(PmfTable, GeometricEmbedding) {
  for (double lambda : {0.1, 0.5, 0.9}) {
    const PmfTable t = pmf_table(CmpParams{std::log(lambda), 0.0});
    for (std::int64_t y = 0; y <= t.y_hi; ++y) {
      ASSERT_NEAR(t.prob(y), oracle::geometric_pmf(y, lambda), 1e-12) << lambda << ' ' << y;
    }
  }
}

TEST(PmfTable, Normalization) {
  for (double nu : {0.0, 0.2, 1.0, 3.0, 100.0, 1e4}) {
    for (double eta : {-2.0, -0.1, 0.5, 3.0, 40.0}) {
      if (nu == 0.0 && eta >= 0.0) continue;
      if (nu > 0.0 && eta / nu > 15.0) continue;
      const PmfTable t = pmf_table(CmpParams{eta, nu});
      double total = 0.0;
      for (double p : t.probs()) total += p;
      EXPECT_NEAR(total, 1.0, 1e-10) << eta << ' ' << nu;
      EXPECT_LE(t.tail_bound, kDefaultTailTol);
    }
  }
}

TEST(PmfTable, MatchesDirectSummation) {
  for (double nu : {0.5, 2.0, 7.5}) {
    const double eta = 1.7;
    const auto want = oracle::cmp_pmf(eta, nu, 300);
    const PmfTable t = pmf_table(CmpParams{eta, nu});
    for (std::int64_t y = 0; y <= t.y_hi; ++y) {
      EXPECT_NEAR(t.prob(y), want[static_cast<std::size_t>(y)], 1e-13);
    }
  }
}

TEST(Moments, ClosedForms) {
  for (double lambda : {0.4, 3.0, 55.0}) {
    const Moments m = moments(CmpParams{std::log(lambda), 1.0});
    EXPECT_NEAR(m.mean, lambda, 1e-12 * lambda);
    EXPECT_NEAR(m.variance, lambda, 1e-11 * lambda);
  }
  const Moments g = moments(CmpParams{std::log(0.5), 0.0});
  EXPECT_NEAR(g.mean, 1.0, 1e-12);
  EXPECT_NEAR(g.variance, 2.0, 1e-12);
}

TEST(Moments, DirectSummationOracle) {
  const auto want = oracle::cmp_moments(std::log(3.0), 2.0, 50);
  const Moments m = moments(CmpParams{std::log(3.0), 2.0});
  EXPECT_NEAR(m.mean, want.mean, 1e-13);
  EXPECT_NEAR(m.variance, want.variance, 1e-13);
}

TEST(Moments, ExtremeDispersionVarianceCollapses) {
  const Moments m = moments(CmpParams{1000.0 * std::log(4.5), 1000.0});
  EXPECT_NEAR(m.mean, 4.0, 1e-12);
  EXPECT_LT(m.variance, 1e-30);
}

TEST(Mode, Examples) {
  EXPECT_EQ(mode(CmpParams{std::log(9.0), 2.0}), 3);
  EXPECT_EQ(mode(CmpParams{std::log(0.5), 1.0}), 0);
  EXPECT_EQ(mode(CmpParams{std::log(16.0), 2.0}), 4);
  const PmfTable t = pmf_table(CmpParams{std::log(16.0), 2.0});
  EXPECT_NEAR(t.prob(3), t.prob(4), 1e-15);
  EXPECT_EQ(mode(CmpParams{0.0, 1.0}), 1);
  EXPECT_EQ(mode(CmpParams{-kInf, 1.0}), 0);
}

TEST(Mode, AgreesWithArgmax) {
  for (double nu : {0.5, 1.0, 2.5, 10.0, 80.0}) {
    for (double eta = -1.0; eta < std::min(30.0, 6.0 * nu); eta += 0.73) {
      const PmfTable t = pmf_table(CmpParams{eta, nu});
      std::int64_t best = 0;
      for (std::int64_t y = 1; y <= t.y_hi; ++y) {
        if (t.log_probs[y] >= t.log_probs[best]) best = y;
      }
      EXPECT_EQ(mode(CmpParams{eta, nu}), best) << eta << ' ' << nu;
    }
  }
}

TEST(SuccessiveLogRatio, Examples) {
  EXPECT_NEAR(successive_log_ratio(1, CmpParams{std::log(2.0), 1.0}), std::log(0.5), 1e-15);
  EXPECT_NEAR(successive_log_ratio(3, CmpParams{std::log(9.0), 2.0}), 0.0, 1e-15);
  const double eta = std::log(0.321) + 10.0 * std::log(5.0);
  EXPECT_NEAR(successive_log_ratio(5, CmpParams{eta, 10.0}), -std::log(0.321), 1e-13);
  EXPECT_THROW(successive_log_ratio(0, CmpParams{0.0, 1.0}), DomainError);
}

TEST(SuccessiveLogRatio, IdentityAgainstTable) {
  for (double nu : {0.3, 1.0, 4.0, 52.26, 500.0}) {
    const double eta = nu * std::log(6.3);
    const CmpParams p{eta, nu};
    const PmfTable t = pmf_table(p);
    for (std::int64_t y = 1; y <= t.y_hi; ++y) {
      const double lhs = t.log_probs[y - 1] - t.log_probs[y];
      ASSERT_NEAR(lhs, successive_log_ratio(y, p), 1e-10 * std::max(1.0, std::abs(lhs)))
          << nu << ' ' << y;
    }
  }
}
