#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cmpkit/cmp_core.hpp"
#include "cmpkit/mean_solver.hpp"

namespace cmpkit {

/// ν → ∞ limit of the mean-parametrized CMP: point mass at integer μ,
/// otherwise masses (1−Δ, Δ) on (⌊μ⌋, ⌈μ⌉) with Δ = μ − ⌊μ⌋.
struct LimitPmf {
  std::int64_t lower_value = 0;
  std::int64_t upper_value = 0;
  double lower_prob = 1.0;
  double upper_prob = 0.0;
  bool degenerate = true;

  double mass(std::int64_t y) const noexcept;
};

LimitPmf limit_pmf(double mu);

/// Solved, immutable mean-parametrized distribution: η(μ, ν) plus its table.
class MeanCmp {
 public:
  explicit MeanCmp(const MeanParams& mp, double tol = kDefaultSolveTol,
                   double tail_tol = kDefaultTailTol);

  const MeanParams& params() const noexcept { return params_; }
  double eta() const noexcept { return table_.params.eta; }
  const PmfTable& table() const noexcept { return table_; }

  double pmf(std::int64_t y) const;
  double log_pmf(std::int64_t y) const;
  double cdf(std::int64_t y) const;
  std::int64_t quantile(double p) const;
  Moments moments() const;

  /// Largest y stored in the window.
  std::int64_t support_max() const noexcept { return table_.y_hi; }

 private:
  MeanParams params_;
  PmfTable table_;
  std::vector<double> cdf_;
};

/// Uniform variates in [0, 1) from the top 53 bits of mt19937_64; both the
/// engine and this mapping are fixed, so seeded streams are reproducible
/// across platforms and releases.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Inverse-cdf sampler over a cached table. Holds generator state: one
/// stream per execution context.
class SampleStream {
 public:
  SampleStream(const MeanParams& mp, std::uint64_t seed,
               double tol = kDefaultSolveTol,
               double tail_tol = kDefaultTailTol);

  std::int64_t next();
  std::vector<std::int64_t> take(std::size_t n);

  const MeanCmp& distribution() const noexcept { return dist_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  MeanCmp dist_;
  std::uint64_t seed_;
  UniformSource uniform_;
};

double pmf(std::int64_t y, const MeanParams& mp);
double cdf(std::int64_t y, const MeanParams& mp);
std::int64_t quantile(double p, const MeanParams& mp);
std::vector<std::int64_t> sample(std::size_t n, const MeanParams& mp,
                                 std::uint64_t seed);

/// Total-variation distance between the (μ, ν) pmf and limit_pmf(μ).
double convergence_diagnostic(double mu, double nu);
double convergence_diagnostic(const MeanCmp& dist);

}  // namespace cmpkit
