#pragma once

#include <cstdint>
#include <string_view>

#include "cmpkit/cmp_core.hpp"

namespace cmpkit {

inline constexpr double kDefaultSolveTol = 1e-10;

/// Mean parametrization (μ, ν); both finite and non-negative.
struct MeanParams {
  double mu = 0.0;
  double nu = 1.0;
};

void validate(const MeanParams& mp);

enum class BracketRule { integer_mu, noninteger_mu, fallback_expansion };

std::string_view to_string(BracketRule rule) noexcept;

struct EtaBracket {
  double eta_lo = 0.0;
  double eta_hi = 0.0;
  BracketRule rule = BracketRule::integer_mu;
};

/// Scale constants of the integer-μ bracket [ν log μ + log a, ν log(μ+1) + log b].
struct BracketConstants {
  double a = 0.5;
  double b = 1.0;
};

/// Maximum geometric widenings before bracketing is declared failed.
inline constexpr int kMaxBracketExpansions = 60;

/// Closed-form bracket on η, validated by the sign of mean_residual at both
/// ends and widened geometrically when the check fails.
EtaBracket bracket(const MeanParams& mp, const BracketConstants& constants = {});

/// The unvalidated closed-form interval (no residual evaluation).
EtaBracket closed_form_bracket(const MeanParams& mp,
                         const BracketConstants& constants = {});

/// Σ (y − μ)·P(Y = y) under CmpParams{eta, ν}; strictly increasing in eta.
double mean_residual(double eta, const MeanParams& mp,
                     double tail_tol = kDefaultTailTol);

struct SolveStats {
  EtaBracket bracket;
  int evaluations = 0;
  int iterations = 0;
};

enum class BracketStrategy {
  closed_form,     ///< Closed-form μ brackets + limit-based starting point.
  expansion_only,  ///< Poisson-guess bracket grown by doubling only.
};

struct SolveOptions {
  double tol = kDefaultSolveTol;
  double tail_tol = kDefaultTailTol;
  BracketStrategy strategy = BracketStrategy::closed_form;
  BracketConstants constants{};
};

/// η with |mean(η, ν) − μ| ≤ tol·max(1, μ). μ = 0 gives -inf; ν = 0 and ν = 1 are
/// closed form (log(μ/(1+μ)) and log μ).
double solve_eta(const MeanParams& mp, double tol = kDefaultSolveTol);
double solve_eta(const MeanParams& mp, const SolveOptions& options,
                 SolveStats* stats = nullptr);

}  // namespace cmpkit
