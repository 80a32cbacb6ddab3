#pragma once

#include <cstddef>
#include <vector>

#include "cmpkit/mean_solver.hpp"

namespace cmpkit {

/// Deterministic low-discrepancy (μ, ν) workload, μ ∈ [mu_lo, mu_hi]
/// log-uniform and ν ∈ [nu_lo, nu_hi] uniform.
std::vector<MeanParams> bracket_workload(std::size_t n, double mu_lo = 1.0,
                                         double mu_hi = 30.0, double nu_lo = 50.0,
                                         double nu_hi = 500.0);

struct BracketBenchmark {
  std::size_t solves = 0;
  double bracketed_median_seconds = 0.0;
  double expansion_median_seconds = 0.0;
  double bracketed_median_evaluations = 0.0;
  double expansion_median_evaluations = 0.0;
  /// expansion_median_seconds / bracketed_median_seconds
  double speedup = 0.0;
  /// Largest |η_bracketed − η_expansion| over the workload.
  double max_eta_disagreement = 0.0;
};

/// Times each solve individually with both bracket strategies (`repeats`
/// passes, fastest pass per solve kept) and reports medians.
BracketBenchmark benchmark_brackets(const std::vector<MeanParams>& workload,
                                    int repeats = 3,
                                    double tol = kDefaultSolveTol);

}  // namespace cmpkit
