#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cmpkit/mean_solver.hpp"

namespace cmpkit {

inline constexpr const char* kGridFormatVersion = "cmpkit-lambda-grid/1";

/// Solved η over a rectangle in (log μ, ν). eta_values is row-major with
/// one row per μ knot. The μ knots are the exact values handed to the
/// solver; interpolation weights are taken in log μ.
struct LambdaGrid {
  std::vector<double> mu_knots;
  std::vector<double> nu_knots;
  std::vector<double> eta_values;
  double solve_tolerance = kDefaultSolveTol;
  std::string version = kGridFormatVersion;

  std::size_t rows() const noexcept { return mu_knots.size(); }
  std::size_t cols() const noexcept { return nu_knots.size(); }
  double at(std::size_t row, std::size_t col) const {
    return eta_values.at(row * cols() + col);
  }
};

/// Solve every knot pair. Knot computations are independent and may run on
/// up to `threads` workers (0 = hardware concurrency). Solver failures are
/// rethrown naming the failing knot.
LambdaGrid build_grid(const std::vector<double>& mu_knots,
                      const std::vector<double>& nu_knots,
                      double tol = kDefaultSolveTol, unsigned threads = 0);

/// Bilinear interpolation in (log μ, ν); exact at knots, no extrapolation.
double interpolate_eta(const LambdaGrid& grid, const MeanParams& mp);

/// μ values evenly spaced in log μ; the endpoints are exactly mu_min, mu_max.
std::vector<double> log_spaced_knots(double mu_min, double mu_max,
                                     std::size_t count);
std::vector<double> linear_knots(double lo, double hi, std::size_t count);

/// Text (JSON) persistence. Every number is a 17-significant-digit string.
void write_grid(std::ostream& out, const LambdaGrid& grid);
LambdaGrid read_grid(std::istream& in);

}  // namespace cmpkit
