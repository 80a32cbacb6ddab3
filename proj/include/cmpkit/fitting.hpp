#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cmpkit/mean_solver.hpp"

namespace cmpkit {

/// Non-empty sample of counts with cached mean and (n−1) variance.
class CountData {
 public:
  explicit CountData(std::vector<std::int64_t> values);

  const std::vector<std::int64_t>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double sample_mean() const noexcept { return mean_; }
  /// Zero for a single observation.
  double sample_variance() const noexcept { return variance_; }
  std::int64_t max() const noexcept { return max_; }
  bool all_equal() const noexcept;
  /// value → occurrence count, ascending.
  std::map<std::int64_t, std::size_t> frequencies() const;

 private:
  std::vector<std::int64_t> values_;
  double mean_ = 0.0;
  double variance_ = 0.0;
  std::int64_t max_ = 0;
};

/// One non-negative integer per line; blank lines skipped. Anything else is a
/// ParseError carrying the 1-based line number.
CountData read_counts(std::istream& in);
CountData read_counts_file(const std::string& path);

struct FitConfig {
  double nu_min = 1e-3;
  double nu_max = 1e6;
  /// Absolute tolerance on log ν for the golden-section/parabolic search.
  double log_nu_tol = 1e-7;
  int scan_points = 48;
  int max_iterations = 200;
  double solve_tol = kDefaultSolveTol;
  double tail_tol = kDefaultTailTol;
};

struct FitResult {
  double mu_hat = 0.0;
  double nu_hat = 0.0;
  double loglik = 0.0;
  double aic = 0.0;
  bool converged = false;
  bool at_boundary = false;
  double fitted_variance = 0.0;
  int iterations = 0;
  std::vector<std::string> warnings;
};

double log_likelihood(const CountData& data, const MeanParams& mp,
                      double solve_tol = kDefaultSolveTol,
                      double tail_tol = kDefaultTailTol);

/// Profile-likelihood MLE: μ̂ = ȳ exactly, then a 1-D search over log ν.
FitResult fit_mle(const CountData& data, const FitConfig& config = {});

/// 2k − 2·loglik.
double aic(double loglik, int k);

struct EmpiricalBaseline {
  std::map<std::int64_t, double> probabilities;
  double loglik = 0.0;
  double aic = 0.0;
  int parameters = 0;
};

/// Relative-frequency model; parameter count = #distinct − 1.
EmpiricalBaseline empirical_baseline(const CountData& data);

}  // namespace cmpkit
