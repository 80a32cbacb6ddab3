#pragma once

#include <cstdint>
#include <vector>

#include "cmpkit/fitting.hpp"

namespace cmpkit {

/// Bandwidth h > 0, mapped to kernel dispersion ν = 1/h.
class Bandwidth {
 public:
  explicit Bandwidth(double h);

  double h() const noexcept { return h_; }
  double nu_of_h() const noexcept { return nu_; }

 private:
  double h_;
  double nu_;
};

struct SmoothedPmf {
  std::int64_t y_max = 0;
  /// estimates[x] for x = 0..y_max.
  std::vector<double> estimates;
  bool renormalized = false;
  double raw_total_mass = 0.0;
};

/// Mean-parametrized CMP kernel with target x evaluated at y.
double kernel_weight(std::int64_t x, std::int64_t y, const Bandwidth& bw);

/// f̂(x) = (1/n) Σ_i K_{x,h}(y_i) for x in 0..y_max.
SmoothedPmf smooth(const CountData& data, const Bandwidth& bw,
                   std::int64_t y_max, bool renormalize = false);

struct KernelCheck {
  double mean_gap = 0.0;
  double variance = 0.0;
};

/// |E K_{x,h} − x| and Var K_{x,h}.
KernelCheck second_order_check(std::int64_t x, const Bandwidth& bw);

/// Least-squares cross-validation score Σ_x f̂(x)² − (2/n) Σ_i f̂_{−i}(y_i).
double lscv_score(const CountData& data, const Bandwidth& bw,
                  std::int64_t y_max);

/// Grid member with the smallest LSCV score; ties go to the smaller h.
Bandwidth cv_bandwidth(const CountData& data, const std::vector<double>& h_grid,
                       std::int64_t y_max);

}  // namespace cmpkit
