#include "cmpkit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "cmpkit/error.hpp"

namespace cmpkit {
namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + mid));
  }
  return m;
}

struct Timing {
  std::vector<double> seconds;
  std::vector<double> evaluations;
  std::vector<double> eta;
};

Timing time_strategy(const std::vector<MeanParams>& workload, int repeats,
                     SolveOptions options) {
  Timing t;
  t.seconds.assign(workload.size(), INFINITY);
  t.evaluations.resize(workload.size());
  t.eta.resize(workload.size());
  for (int r = 0; r < repeats; ++r) {
    for (std::size_t i = 0; i < workload.size(); ++i) {
      SolveStats stats;
      const auto start = std::chrono::steady_clock::now();
      const double eta = solve_eta(workload[i], options, &stats);
      const auto stop = std::chrono::steady_clock::now();
      t.seconds[i] = std::min(
          t.seconds[i], std::chrono::duration<double>(stop - start).count());
      t.evaluations[i] = stats.evaluations;
      t.eta[i] = eta;
    }
  }
  return t;
}

}  // namespace

std::vector<MeanParams> bracket_workload(std::size_t n, double mu_lo, double mu_hi,
                                         double nu_lo, double nu_hi) {
  if (!(mu_lo > 0.0) || !(mu_hi >= mu_lo) || !(nu_lo >= 0.0) || !(nu_hi >= nu_lo)) {
    throw DomainError("invalid benchmark workload ranges");
  }
  // Additive recurrences with the golden ratio and sqrt(2).
  constexpr double kAlpha = 0.6180339887498949;
  constexpr double kBeta = 0.41421356237309515;
  std::vector<MeanParams> out;
  out.reserve(n);
  const double log_lo = std::log(mu_lo);
  const double log_span = std::log(mu_hi) - log_lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double k = static_cast<double>(i) + 1.0;
    const double u = k * kAlpha - std::floor(k * kAlpha);
    const double v = k * kBeta - std::floor(k * kBeta);
    out.push_back({std::exp(log_lo + u * log_span), nu_lo + v * (nu_hi - nu_lo)});
  }
  return out;
}

BracketBenchmark benchmark_brackets(const std::vector<MeanParams>& workload,
                                    int repeats, double tol) {
  if (workload.empty()) throw DomainError("benchmark workload is empty");
  if (repeats < 1) throw DomainError("benchmark repeats must be >= 1");
  SolveOptions bracketed;
  bracketed.tol = tol;
  SolveOptions expansion = bracketed;
  expansion.strategy = BracketStrategy::expansion_only;

  const Timing a = time_strategy(workload, repeats, bracketed);
  const Timing b = time_strategy(workload, repeats, expansion);

  BracketBenchmark out;
  out.solves = workload.size();
  out.bracketed_median_seconds = median(a.seconds);
  out.expansion_median_seconds = median(b.seconds);
  out.bracketed_median_evaluations = median(a.evaluations);
  out.expansion_median_evaluations = median(b.evaluations);
  out.speedup = out.expansion_median_seconds / out.bracketed_median_seconds;
  for (std::size_t i = 0; i < workload.size(); ++i) {
    out.max_eta_disagreement =
        std::max(out.max_eta_disagreement, std::abs(a.eta[i] - b.eta[i]));
  }
  return out;
}

}  // namespace cmpkit
