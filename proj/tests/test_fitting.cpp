#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "cmpkit/error.hpp"
#include "cmpkit/fitting.hpp"
#include "cmpkit/mpcmp.hpp"
#include "oracles.hpp"

using namespace cmpkit;

namespace {
const CountData kTableData({26, 27, 27, 28, 28, 28, 28});
}

TEST(CountData, Summaries) {
  EXPECT_EQ(kTableData.size(), 7u);
  EXPECT_NEAR(kTableData.sample_mean(), 192.0 / 7.0, 1e-15);
  EXPECT_NEAR(kTableData.sample_variance(), 13.0 / 21.0, 1e-15);
  EXPECT_EQ(kTableData.max(), 28);
  EXPECT_FALSE(kTableData.all_equal());
  EXPECT_TRUE(CountData({3, 3}).all_equal());
  EXPECT_EQ(CountData({5}).sample_variance(), 0.0);
  EXPECT_THROW(CountData({}), DomainError);
  EXPECT_THROW(CountData({1, -2}), DomainError);
}

TEST(ReadCounts, AcceptsBlankLinesAndWhitespace) {
  std::istringstream in("3\n\n  4 \r\n5\n\n");
  const CountData d = read_counts(in);
  EXPECT_EQ(d.values(), (std::vector<std::int64_t>{3, 4, 5}));
}

TEST(ReadCounts, ReportsOffendingLine) {
  std::istringstream in("3\n4\nfive\n");
  try {
    read_counts(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  for (const char* bad : {"-1\n", "2.5\n", "7 8\n", "1e3\n"}) {
    std::istringstream s(bad);
    EXPECT_THROW(read_counts(s), ParseError) << bad;
  }
  std::istringstream empty("\n\n");
  EXPECT_THROW(read_counts(empty), ParseError);
  EXPECT_THROW(read_counts_file("/nonexistent/counts.txt"), ParseError);
}

TEST(LogLikelihood, PoissonEmbedding) {
  const CountData d({0, 1, 1, 2, 5, 3});
  const double mu = d.sample_mean();
  double want = 0.0;
  for (auto y : d.values()) want += std::log(oracle::poisson_pmf(y, mu));
  EXPECT_NEAR(log_likelihood(d, MeanParams{mu, 1.0}), want, 1e-12);
}

TEST(LogLikelihood, TableFitValue) {
  EXPECT_NEAR(log_likelihood(kTableData, MeanParams{27.43, 52.26}), 2.0 - 19.48 / 2.0, 0.05);
}

TEST(LogLikelihood, AllEqualApproachesZero) {
  EXPECT_GE(log_likelihood(CountData({5, 5, 5}), MeanParams{5.0, 1e4}), -1e-6);
}

TEST(Aic, Values) {
  EXPECT_NEAR(aic(-7.74, 2), 19.48, 1e-12);
  EXPECT_EQ(aic(0.0, 0), 0.0);
  EXPECT_NEAR(aic(-3.758, 2), 11.516, 1e-12);
  EXPECT_THROW(aic(0.0, -1), DomainError);
}

TEST(FitMle, TableData) {
  const FitResult r = fit_mle(kTableData);
  EXPECT_NEAR(r.mu_hat, 27.43, 0.01);
  EXPECT_NEAR(r.nu_hat, 52.26, 0.1 * 52.26);
  EXPECT_NEAR(r.aic, 19.48, 0.1);
  EXPECT_NEAR(r.fitted_variance, 0.53, 0.05);
  EXPECT_TRUE(r.converged);
  EXPECT_FALSE(r.at_boundary);
  EXPECT_TRUE(r.warnings.empty());
}

TEST(FitMle, ProfileIsMaximized) {
  const FitResult r = fit_mle(kTableData);
  for (double f : {0.9, 0.99, 1.01, 1.1}) {
    EXPECT_LE(log_likelihood(kTableData, MeanParams{r.mu_hat, r.nu_hat * f}), r.loglik + 1e-12);
  }
}

TEST(FitMle, RecoversPoissonDispersion) {
  const CountData d(sample(2000, MeanParams{5.0, 1.0}, 20240607));
  const FitResult r = fit_mle(d);
  EXPECT_GE(r.nu_hat, 0.8);
  EXPECT_LE(r.nu_hat, 1.25);
  EXPECT_EQ(r.mu_hat, d.sample_mean());
}

TEST(FitMle, AllEqualDataIsBoundary) {
  const FitResult r = fit_mle(CountData({3, 3, 3, 3}));
  EXPECT_TRUE(r.at_boundary);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.mu_hat, 3.0);
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_GE(r.loglik, -1e-6);
}

TEST(FitMle, ConfigRejections) {
  FitConfig c;
  c.nu_min = 0.0;
  EXPECT_THROW(fit_mle(kTableData, c), DomainError);
  c = FitConfig{};
  c.nu_max = c.nu_min;
  EXPECT_THROW(fit_mle(kTableData, c), DomainError);
}

TEST(EmpiricalBaseline, TableData) {
  const EmpiricalBaseline e = empirical_baseline(kTableData);
  ASSERT_EQ(e.probabilities.size(), 3u);
  EXPECT_EQ(e.probabilities.at(26), 1.0 / 7.0);
  EXPECT_EQ(e.probabilities.at(27), 2.0 / 7.0);
  EXPECT_EQ(e.probabilities.at(28), 4.0 / 7.0);
  const double want = std::log(1.0 / 7.0) + 2 * std::log(2.0 / 7.0) + 4 * std::log(4.0 / 7.0);
  EXPECT_NEAR(e.loglik, want, 1e-14);
  EXPECT_EQ(e.parameters, 2);
  EXPECT_NEAR(e.aic, 4.0 - 2.0 * want, 1e-13);
}

TEST(EmpiricalBaseline, Singleton) {
  const EmpiricalBaseline e = empirical_baseline(CountData({0}));
  EXPECT_EQ(e.probabilities.at(0), 1.0);
  EXPECT_EQ(e.loglik, 0.0);
  EXPECT_EQ(e.aic, 0.0);
}
