#include "cmpkit/kernel_smoother.hpp"

#include <cmath>
#include <limits>

#include "cmpkit/error.hpp"
#include "cmpkit/mpcmp.hpp"
#include "cmpkit/numeric.hpp"

namespace cmpkit {
namespace {

MeanCmp kernel_at(std::int64_t x, const Bandwidth& bw) {
  if (x < 0) throw DomainError("kernel target x must be >= 0");
  return MeanCmp(MeanParams{static_cast<double>(x), bw.nu_of_h()});
}

// Per-target kernels K_{x,h} for x = 0..y_max, evaluated at the data.
struct KernelMatrix {
  std::vector<double> estimates;           // f̂(x)
  std::vector<double> self_weight;         // K_{x,h}(x)
};

KernelMatrix evaluate_kernels(const CountData& data, const Bandwidth& bw,
                              std::int64_t y_max) {
  if (y_max < data.max()) {
    throw DomainError("y_max must be >= the largest observation");
  }
  const auto freq = data.frequencies();
  const double n = static_cast<double>(data.size());
  KernelMatrix out;
  out.estimates.resize(static_cast<std::size_t>(y_max) + 1);
  out.self_weight.resize(out.estimates.size());
  for (std::int64_t x = 0; x <= y_max; ++x) {
    const MeanCmp kernel = kernel_at(x, bw);
    CompensatedSum sum;
    for (const auto& [value, count] : freq) {
      sum.add(static_cast<double>(count) * kernel.pmf(value));
    }
    out.estimates[static_cast<std::size_t>(x)] = sum.value() / n;
    out.self_weight[static_cast<std::size_t>(x)] = kernel.pmf(x);
  }
  return out;
}

}  // namespace

Bandwidth::Bandwidth(double h) : h_(h), nu_(1.0 / h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw DomainError("bandwidth h must be finite and > 0");
  }
}

double kernel_weight(std::int64_t x, std::int64_t y, const Bandwidth& bw) {
  if (y < 0) throw DomainError("kernel argument y must be >= 0");
  return kernel_at(x, bw).pmf(y);
}

SmoothedPmf smooth(const CountData& data, const Bandwidth& bw,
                   std::int64_t y_max, bool renormalize) {
  SmoothedPmf out;
  out.y_max = y_max;
  out.estimates = evaluate_kernels(data, bw, y_max).estimates;
  CompensatedSum total;
  for (double e : out.estimates) total.add(e);
  out.raw_total_mass = total.value();
  if (renormalize && out.raw_total_mass > 0.0) {
    for (double& e : out.estimates) e /= out.raw_total_mass;
    out.renormalized = true;
  }
  return out;
}

KernelCheck second_order_check(std::int64_t x, const Bandwidth& bw) {
  const Moments m = kernel_at(x, bw).moments();
  return {std::abs(m.mean - static_cast<double>(x)), m.variance};
}

double lscv_score(const CountData& data, const Bandwidth& bw, std::int64_t y_max) {
  if (data.size() < 2) {
    throw DomainError("cross-validation needs at least two observations");
  }
  const KernelMatrix k = evaluate_kernels(data, bw, y_max);
  const double n = static_cast<double>(data.size());
  CompensatedSum squares;
  for (double e : k.estimates) squares.add(e * e);
  CompensatedSum loo;
  for (std::int64_t y : data.values()) {
    const auto i = static_cast<std::size_t>(y);
    loo.add((n * k.estimates[i] - k.self_weight[i]) / (n - 1.0));
  }
  return squares.value() - 2.0 / n * loo.value();
}

Bandwidth cv_bandwidth(const CountData& data, const std::vector<double>& h_grid,
                       std::int64_t y_max) {
  if (h_grid.empty()) throw DomainError("bandwidth grid must be non-empty");
  if (h_grid.size() == 1) return Bandwidth(h_grid.front());
  double best_h = std::numeric_limits<double>::quiet_NaN();
  double best_score = std::numeric_limits<double>::infinity();
  for (double h : h_grid) {
    const double score = lscv_score(data, Bandwidth(h), y_max);
    if (score < best_score || (score == best_score && h < best_h)) {
      best_score = score;
      best_h = h;
    }
  }
  return Bandwidth(best_h);
}

}  // namespace cmpkit
