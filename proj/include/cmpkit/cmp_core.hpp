#pragma once

#include <cstdint>
#include <vector>

namespace cmpkit {

inline constexpr double kDefaultTailTol = 1e-14;

/// Canonical CMP parameters. The rate only ever appears as η = log λ;
/// η = -inf is λ = 0. Valid when ν ≥ 0 and, at ν = 0, η < 0.
struct CmpParams {
  double eta = 0.0;
  double nu = 1.0;
};

/// Throws DomainError for NaN/negative ν or η = +inf/NaN, and
/// DivergentSeriesError for ν = 0 with η ≥ 0.
void validate(const CmpParams& params);

/// Normalized log-probabilities on the certified window 0..y_hi.
struct PmfTable {
  CmpParams params;
  std::int64_t y_lo = 0;
  std::int64_t y_hi = 0;
  std::vector<double> log_probs;
  double log_normalizer = 0.0;
  double tail_bound = 0.0;

  std::size_t size() const noexcept { return log_probs.size(); }
  /// exp(log_probs[y]); zero outside the window.
  double prob(std::int64_t y) const noexcept;
  /// Linear probabilities over the window.
  std::vector<double> probs() const;
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Smallest certified truncation point: the series beyond y_hi holds at most
/// tail_tol of the total mass (geometric domination of the term ratio).
std::int64_t truncation_window(const CmpParams& params,
                               double tail_tol = kDefaultTailTol);

double log_normalizer(const CmpParams& params,
                      double tail_tol = kDefaultTailTol);

double log_pmf(std::int64_t y, const CmpParams& params,
               double tail_tol = kDefaultTailTol);

PmfTable pmf_table(const CmpParams& params, double tail_tol = kDefaultTailTol);

Moments moments(const CmpParams& params, double tail_tol = kDefaultTailTol);
Moments moments(const PmfTable& table);

/// floor(exp(η/ν)); ties (y^ν = λ) resolve to the larger y. 0 when ν = 0.
std::int64_t mode(const CmpParams& params);

/// log[P(Y=y-1)/P(Y=y)] = ν·log y − η. Needs no normalizer.
double successive_log_ratio(std::int64_t y, const CmpParams& params);

}  // namespace cmpkit
