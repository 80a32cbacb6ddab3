#include "cmpkit/mean_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cmpkit/error.hpp"
#include "cmpkit/numeric.hpp"
#include "series.hpp"

namespace cmpkit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxSolveIterations = 200;

std::string describe(const MeanParams& mp) {
  std::ostringstream os;
  os.precision(17);
  os << "(mu=" << mp.mu << ", nu=" << mp.nu << ")";
  return os.str();
}

struct Evaluation {
  double residual = 0.0;
  double variance = 0.0;
};

// Holds the scratch window and counts series evaluations for one solve.
class ResidualEvaluator {
 public:
  ResidualEvaluator(const MeanParams& mp, double tail_tol)
      : mp_(mp), tail_tol_(tail_tol) {}

  Evaluation evaluate(double eta) {
    ++evaluations_;
    const CmpParams params{eta, mp_.nu};
    validate(params);
    detail::build_window(params, tail_tol_, window_);
    const auto& rel = window_.rel;
    CompensatedSum r;
    for (std::size_t y = 0; y < rel.size(); ++y) {
      const double p = std::exp(rel[y] - window_.log_sum);
      r.add((static_cast<double>(y) - mp_.mu) * p);
    }
    const double residual = r.value();
    const double center = mp_.mu + residual;
    CompensatedSum v;
    for (std::size_t y = 0; y < rel.size(); ++y) {
      const double p = std::exp(rel[y] - window_.log_sum);
      const double d = static_cast<double>(y) - center;
      v.add(d * d * p);
    }
    return {residual, std::max(0.0, v.value())};
  }

  // Far above the root the series window would be enormous; there
  // mean > λ^{1/ν} − 1 (from E[λ/(Y+1)^ν] = 1 − P(0) and Jensen) settles the
  // sign without summing.
  bool surely_above_root(double eta) const {
    return mp_.nu > 0.0 &&
           eta / mp_.nu > std::log(2.0 * (mp_.mu + 1.0) + 64.0);
  }

  int sign(double eta) {
    if (mp_.nu == 0.0) {
      if (eta >= 0.0) return 1;
      const double mean = std::exp(eta) / -std::expm1(eta);
      return mean > mp_.mu ? 1 : (mean < mp_.mu ? -1 : 0);
    }
    if (surely_above_root(eta)) return 1;
    const double r = evaluate(eta).residual;
    return r > 0.0 ? 1 : (r < 0.0 ? -1 : 0);
  }

  int evaluations() const noexcept { return evaluations_; }

 private:
  MeanParams mp_;
  double tail_tol_;
  detail::Window window_;
  int evaluations_ = 0;
};

// Grow the interval geometrically until the residual changes sign across it.
EtaBracket expand(EtaBracket b, const MeanParams& mp, ResidualEvaluator& eval) {
  if (!(b.eta_hi > b.eta_lo)) {
    const double mid = 0.5 * (b.eta_lo + b.eta_hi);
    b.eta_lo = mid - 0.5;
    b.eta_hi = mid + 0.5;
    b.rule = BracketRule::fallback_expansion;
  }
  int s_lo = eval.sign(b.eta_lo);
  int s_hi = eval.sign(b.eta_hi);
  for (int n = 0; !(s_lo <= 0 && s_hi >= 0); ++n) {
    if (n == kMaxBracketExpansions) {
      throw ConvergenceError(Stage::bracket,
                             "no sign change after " +
                                 std::to_string(kMaxBracketExpansions) +
                                 " expansions for " + describe(mp));
    }
    b.rule = BracketRule::fallback_expansion;
    const double width = 2.0 * (b.eta_hi - b.eta_lo);
    if (s_lo > 0) {
      b.eta_hi = b.eta_lo;
      s_hi = s_lo;
      b.eta_lo -= width;
      s_lo = eval.sign(b.eta_lo);
    } else {
      b.eta_lo = b.eta_hi;
      s_lo = s_hi;
      b.eta_hi += width;
      s_hi = eval.sign(b.eta_hi);
    }
  }
  return b;
}

// Where the root sits in the ν → ∞ limit: the integer-μ plateau balances
// P(μ−1) against P(μ+1); the shifted Bernoulli has P(⌈μ⌉)/P(⌊μ⌋) = Δ/(1−Δ).
double limit_guess(const MeanParams& mp) {
  const double floor_mu = std::floor(mp.mu);
  const double delta = mp.mu - floor_mu;
  if (delta == 0.0) {
    return 0.5 * mp.nu * (std::log(mp.mu) + std::log1p(mp.mu));
  }
  return mp.nu * std::log(floor_mu + 1.0) + std::log(delta) - std::log1p(-delta);
}

void check_solve_inputs(const MeanParams& mp, const SolveOptions& options) {
  validate(mp);
  if (!(options.tol > 0.0) || !std::isfinite(options.tol)) {
    throw DomainError("solver tolerance must be finite and > 0");
  }
  detail::check_tail_tol(options.tail_tol);
}

}  // namespace

void validate(const MeanParams& mp) {
  if (!std::isfinite(mp.mu) || mp.mu < 0.0) {
    throw DomainError("mu must be finite and >= 0");
  }
  if (!std::isfinite(mp.nu) || mp.nu < 0.0) {
    throw DomainError("nu must be finite and >= 0");
  }
}

std::string_view to_string(BracketRule rule) noexcept {
  switch (rule) {
    case BracketRule::integer_mu: return "integer_mu";
    case BracketRule::noninteger_mu: return "noninteger_mu";
    case BracketRule::fallback_expansion: return "fallback_expansion";
  }
  return "unknown";
}

EtaBracket closed_form_bracket(const MeanParams& mp, const BracketConstants& constants) {
  validate(mp);
  if (mp.mu == 0.0) {
    throw DomainError("mu = 0 has eta = -inf; no bracket exists");
  }
  if (!(constants.a > 0.0) || !(constants.b > 0.0)) {
    throw DomainError("bracket constants a, b must be > 0");
  }
  const double floor_mu = std::floor(mp.mu);
  const double delta = mp.mu - floor_mu;
  if (delta == 0.0) {
    return {mp.nu * std::log(mp.mu) + std::log(constants.a),
            mp.nu * std::log1p(mp.mu) + std::log(constants.b),
            BracketRule::integer_mu};
  }
  const double base = mp.nu * std::log(floor_mu + 1.0);
  return {std::log(delta) + base, base - std::log1p(-delta),
          BracketRule::noninteger_mu};
}

EtaBracket bracket(const MeanParams& mp, const BracketConstants& constants) {
  const EtaBracket initial = closed_form_bracket(mp, constants);
  ResidualEvaluator eval(mp, kDefaultTailTol);
  return expand(initial, mp, eval);
}

double mean_residual(double eta, const MeanParams& mp, double tail_tol) {
  validate(mp);
  detail::check_tail_tol(tail_tol);
  ResidualEvaluator eval(mp, tail_tol);
  return eval.evaluate(eta).residual;
}

double solve_eta(const MeanParams& mp, double tol) {
  SolveOptions options;
  options.tol = tol;
  return solve_eta(mp, options);
}

double solve_eta(const MeanParams& mp, const SolveOptions& options,
                 SolveStats* stats) {
  check_solve_inputs(mp, options);
  if (mp.mu == 0.0) return -kInf;
  if (mp.nu == 0.0) return std::log(mp.mu) - std::log1p(mp.mu);
  if (mp.nu == 1.0) return std::log(mp.mu);  // Poisson: mean = λ

  ResidualEvaluator eval(mp, options.tail_tol);
  EtaBracket b;
  double x = 0.0;
  if (options.strategy == BracketStrategy::closed_form) {
    b = expand(closed_form_bracket(mp, options.constants), mp, eval);
    x = b.rule == BracketRule::fallback_expansion ? 0.5 * (b.eta_lo + b.eta_hi)
                                                  : limit_guess(mp);
  } else {
    const double center = std::log(mp.mu);
    b = expand({center - 0.5, center + 0.5, BracketRule::fallback_expansion}, mp,
               eval);
    x = 0.5 * (b.eta_lo + b.eta_hi);
  }
  if (!(x > b.eta_lo && x < b.eta_hi)) x = 0.5 * (b.eta_lo + b.eta_hi);

  const double scale = options.tol * std::max(1.0, mp.mu);
  double lo = b.eta_lo;
  double hi = b.eta_hi;
  double step_before_last = hi - lo;
  double last_step = step_before_last;
  int iteration = 0;
  auto finish = [&](double eta) {
    if (stats) {
      stats->bracket = b;
      stats->evaluations = eval.evaluations();
      stats->iterations = iteration;
    }
    return eta;
  };

  for (iteration = 1; iteration <= kMaxSolveIterations; ++iteration) {
    if (eval.surely_above_root(x)) {
      hi = x;
      x = lo + 0.5 * (hi - lo);
      continue;
    }
    const Evaluation e = eval.evaluate(x);
    if (e.residual == 0.0) return finish(x);
    if (e.residual < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const bool within_tol = std::abs(e.residual) <= scale;
    const bool has_slope = e.variance > 0.0 && std::isfinite(e.variance);
    const double newton = has_slope ? e.residual / e.variance : kInf;
    if (within_tol &&
        (!has_slope || std::abs(newton) <= 1e-12 * std::max(1.0, std::abs(x)))) {
      return finish(x);
    }
    if (hi - lo <= 4.0 * kEps * std::max(1.0, std::abs(x))) {
      if (within_tol) return finish(x);
      throw ConvergenceError(Stage::solve,
                             "bracket collapsed with residual " +
                                 std::to_string(e.residual) + " for " +
                                 describe(mp));
    }
    const double candidate = x - newton;
    const bool newton_usable = has_slope && candidate > lo && candidate < hi &&
                               std::abs(2.0 * newton) <= std::abs(step_before_last);
    step_before_last = last_step;
    if (newton_usable) {
      last_step = newton;
      x = candidate;
    } else {
      last_step = 0.5 * (hi - lo);
      x = lo + last_step;
    }
  }
  throw ConvergenceError(Stage::solve, "no convergence in " +
                                           std::to_string(kMaxSolveIterations) +
                                           " iterations for " + describe(mp));
}

}  // namespace cmpkit
