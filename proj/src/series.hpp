#pragma once

// Internal: certified log-term window shared by cmp_core and mean_solver.

#include <cstdint>
#include <vector>

#include "cmpkit/cmp_core.hpp"

namespace cmpkit::detail {

/// Hard cap on window length (entries); beyond this the series is refused.
inline constexpr std::int64_t kMaxWindow = 20'000'000;

struct Window {
  std::int64_t mode = 0;
  /// log term(y) − log term(mode) for y = 0..y_hi.
  std::vector<double> rel;
  /// Certified omitted tail, relative to the mode term.
  double tail_rel = 0.0;
  /// log Σ exp(rel).
  double log_sum = 0.0;

  std::int64_t y_hi() const noexcept {
    return static_cast<std::int64_t>(rel.size()) - 1;
  }
};

/// Params must already be validated. `window` is reused to avoid allocation.
void build_window(const CmpParams& params, double tail_tol, Window& window);

std::int64_t mode_of(const CmpParams& params);

/// log term(mode) = mode·η − ν·log(mode!).
double log_mode_term(const CmpParams& params, std::int64_t mode);

void check_tail_tol(double tail_tol);

}  // namespace cmpkit::detail
