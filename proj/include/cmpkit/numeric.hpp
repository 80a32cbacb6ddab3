#pragma once

#include <cstdint>
#include <span>

namespace cmpkit {

/// A natural-log scale quantity. Negative infinity encodes zero; NaN and
/// positive infinity are rejected on construction.
class LogValue {
 public:
  LogValue() = default;
  explicit LogValue(double value);

  static LogValue zero() noexcept;

  double value() const noexcept { return value_; }
  double linear() const noexcept;
  bool is_zero() const noexcept;

  friend bool operator==(const LogValue&, const LogValue&) = default;

 private:
  double value_ = 0.0;
};

/// log Γ(x) for x > 0. Integer arguments up to 21 come from an exact table.
double log_gamma(double x);

/// ψ(x) = Γ'(x)/Γ(x) for x > 0.
double digamma(double x);

/// log Σ exp(t_i), two-pass (max, then compensated sum). Entries may be -inf.
double log_sum_exp(std::span<const double> terms);

/// log(μ^y / y!).
double log_poisson_weight(double mu, std::int64_t y);

/// log(b! / a!) for 0 ≤ a ≤ b; sums logs directly for short spans.
double log_factorial_ratio(std::int64_t a, std::int64_t b);

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace cmpkit
