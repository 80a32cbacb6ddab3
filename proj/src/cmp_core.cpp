#include "cmpkit/cmp_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cmpkit/error.hpp"
#include "cmpkit/numeric.hpp"
#include "series.hpp"

namespace cmpkit {
namespace detail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Terms below max·1e-60 are not worth visiting.
const double kWorkCutoff = -60.0 * std::log(10.0);

}  // namespace

void check_tail_tol(double tail_tol) {
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) {
    throw DomainError("tail_tol must lie in (0, 1)");
  }
}

std::int64_t mode_of(const CmpParams& params) {
  if (params.eta == -kInf || params.nu == 0.0 || params.eta < 0.0) return 0;
  const double log_mode = params.eta / params.nu;
  if (log_mode > 43.0) {  // exp(43) ~ 4.7e18, near the int64 limit
    throw DivergentSeriesError("mode exp(eta/nu) exceeds the integer range");
  }
  auto m = static_cast<std::int64_t>(std::floor(std::exp(log_mode)));
  // Correct floor(exp(·)) rounding against the exact condition ν·log y ≤ η.
  while (params.nu * std::log(static_cast<double>(m + 1)) <= params.eta) ++m;
  while (m > 0 && params.nu * std::log(static_cast<double>(m)) > params.eta) --m;
  return m;
}

double log_mode_term(const CmpParams& params, std::int64_t mode) {
  if (mode == 0) return 0.0;
  const double m = static_cast<double>(mode);
  return m * params.eta - params.nu * log_gamma(m + 1.0);
}

void build_window(const CmpParams& params, double tail_tol, Window& window) {
  window.rel.clear();
  window.tail_rel = 0.0;
  window.log_sum = 0.0;
  if (params.eta == -kInf) {
    window.mode = 0;
    window.rel.push_back(0.0);
    return;
  }
  const std::int64_t m = mode_of(params);
  if (m >= kMaxWindow) {
    throw DivergentSeriesError("series window around mode " +
                               std::to_string(m) + " is too large");
  }
  window.mode = m;
  const double eta = params.eta;
  const double nu = params.nu;

  window.rel.resize(static_cast<std::size_t>(m) + 1);
  window.rel[static_cast<std::size_t>(m)] = 0.0;
  for (std::int64_t y = m; y >= 1; --y) {
    const auto i = static_cast<std::size_t>(y);
    window.rel[i - 1] = window.rel[i] + (nu * std::log(static_cast<double>(y)) - eta);
  }

  double t = 0.0;
  for (std::int64_t y = m;; ++y) {
    // log of term(y+1)/term(y); non-increasing in y.
    const double log_ratio = eta - nu * std::log(static_cast<double>(y + 1));
    if (y > m && t < kWorkCutoff && log_ratio < 0.0) {
      const double tail = std::exp(t + log_ratio) / -std::expm1(log_ratio);
      if (tail <= tail_tol) {
        window.tail_rel = tail;
        break;
      }
    }
    if (y + 1 >= kMaxWindow) {
      throw DivergentSeriesError("series window exceeds " +
                                 std::to_string(kMaxWindow) + " terms");
    }
    t += log_ratio;
    window.rel.push_back(t);
  }
  window.log_sum = log_sum_exp(window.rel);
}

}  // namespace detail

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void validate(const CmpParams& params) {
  if (std::isnan(params.nu) || params.nu < 0.0 || params.nu == kInf) {
    throw DomainError("nu must be finite and >= 0");
  }
  if (std::isnan(params.eta) || params.eta == kInf) {
    throw DomainError("eta must be finite or -inf");
  }
  if (params.nu == 0.0 && params.eta >= 0.0) {
    throw DivergentSeriesError(
        "normalizing series diverges for nu = 0 and lambda >= 1");
  }
}

double PmfTable::prob(std::int64_t y) const noexcept {
  if (y < y_lo || y > y_hi) return 0.0;
  return std::exp(log_probs[static_cast<std::size_t>(y)]);
}

std::vector<double> PmfTable::probs() const {
  std::vector<double> out(log_probs.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::exp(log_probs[i]);
  return out;
}

std::int64_t truncation_window(const CmpParams& params, double tail_tol) {
  validate(params);
  detail::check_tail_tol(tail_tol);
  detail::Window window;
  detail::build_window(params, tail_tol, window);
  return window.y_hi();
}

double log_normalizer(const CmpParams& params, double tail_tol) {
  validate(params);
  detail::check_tail_tol(tail_tol);
  detail::Window window;
  detail::build_window(params, tail_tol, window);
  return detail::log_mode_term(params, window.mode) + window.log_sum;
}

PmfTable pmf_table(const CmpParams& params, double tail_tol) {
  validate(params);
  detail::check_tail_tol(tail_tol);
  detail::Window window;
  detail::build_window(params, tail_tol, window);

  PmfTable table;
  table.params = params;
  table.y_lo = 0;
  table.y_hi = window.y_hi();
  table.log_probs = std::move(window.rel);
  for (double& lp : table.log_probs) lp -= window.log_sum;
  table.log_normalizer = detail::log_mode_term(params, window.mode) + window.log_sum;
  table.tail_bound = window.tail_rel * std::exp(-window.log_sum);
  return table;
}

double log_pmf(std::int64_t y, const CmpParams& params, double tail_tol) {
  if (y < 0) throw DomainError("log_pmf requires y >= 0");
  const PmfTable table = pmf_table(params, tail_tol);
  if (y <= table.y_hi) return table.log_probs[static_cast<std::size_t>(y)];
  // Beyond the window: extend from y_hi with the exact term ratio.
  const double steps = static_cast<double>(y - table.y_hi);
  return table.log_probs.back() + steps * params.eta -
         params.nu * log_factorial_ratio(table.y_hi, y);
}

Moments moments(const PmfTable& table) {
  CompensatedSum mean_sum;
  for (std::size_t y = 0; y < table.log_probs.size(); ++y) {
    mean_sum.add(static_cast<double>(y) * std::exp(table.log_probs[y]));
  }
  const double mean = mean_sum.value();
  CompensatedSum var_sum;
  for (std::size_t y = 0; y < table.log_probs.size(); ++y) {
    const double d = static_cast<double>(y) - mean;
    var_sum.add(d * d * std::exp(table.log_probs[y]));
  }
  return {mean, std::max(0.0, var_sum.value())};
}

Moments moments(const CmpParams& params, double tail_tol) {
  return moments(pmf_table(params, tail_tol));
}

std::int64_t mode(const CmpParams& params) {
  validate(params);
  return detail::mode_of(params);
}

double successive_log_ratio(std::int64_t y, const CmpParams& params) {
  if (y < 1) throw DomainError("successive_log_ratio requires y >= 1");
  validate(params);
  return params.nu * std::log(static_cast<double>(y)) - params.eta;
}

}  // namespace cmpkit
