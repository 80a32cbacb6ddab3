#include "cmpkit/fitting.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "cmpkit/error.hpp"
#include "cmpkit/format.hpp"
#include "cmpkit/mpcmp.hpp"
#include "cmpkit/numeric.hpp"

namespace cmpkit {
namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kSpace);
  return s.substr(first, last - first + 1);
}

}  // namespace

CountData::CountData(std::vector<std::int64_t> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("count data must be non-empty");
  CompensatedSum sum;
  for (std::int64_t v : values_) {
    if (v < 0) throw DomainError("counts must be non-negative");
    sum.add(static_cast<double>(v));
    max_ = std::max(max_, v);
  }
  const double n = static_cast<double>(values_.size());
  mean_ = sum.value() / n;
  if (values_.size() > 1) {
    CompensatedSum ss;
    for (std::int64_t v : values_) {
      const double d = static_cast<double>(v) - mean_;
      ss.add(d * d);
    }
    variance_ = ss.value() / (n - 1.0);
  }
}

bool CountData::all_equal() const noexcept {
  return std::all_of(values_.begin(), values_.end(),
                     [&](std::int64_t v) { return v == values_.front(); });
}

std::map<std::int64_t, std::size_t> CountData::frequencies() const {
  std::map<std::int64_t, std::size_t> out;
  for (std::int64_t v : values_) ++out[v];
  return out;
}

CountData read_counts(std::istream& in) {
  std::vector<std::int64_t> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    std::int64_t value = 0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size() ||
        value < 0) {
      throw ParseError(line_no, "line " + std::to_string(line_no) +
                                    ": expected a non-negative integer, got '" +
                                    std::string(text) + "'");
    }
    values.push_back(value);
  }
  if (values.empty()) throw ParseError(0, "input contains no counts");
  return CountData(std::move(values));
}

CountData read_counts_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return read_counts(in);
}

double log_likelihood(const CountData& data, const MeanParams& mp,
                      double solve_tol, double tail_tol) {
  const MeanCmp dist(mp, solve_tol, tail_tol);
  CompensatedSum sum;
  for (const auto& [value, count] : data.frequencies()) {
    sum.add(static_cast<double>(count) * dist.log_pmf(value));
  }
  return sum.value();
}

double aic(double loglik, int k) {
  if (k < 0) throw DomainError("parameter count must be >= 0");
  return 2.0 * k - 2.0 * loglik;
}

FitResult fit_mle(const CountData& data, const FitConfig& config) {
  if (!(config.nu_min > 0.0) || !(config.nu_max > config.nu_min) ||
      !std::isfinite(config.nu_max)) {
    throw DomainError("fit requires 0 < nu_min < nu_max < inf");
  }
  if (config.scan_points < 3) throw DomainError("fit scan needs >= 3 points");

  FitResult result;
  result.mu_hat = data.sample_mean();
  const double mu = result.mu_hat;
  auto loglik_at = [&](double nu) {
    return log_likelihood(data, MeanParams{mu, nu}, config.solve_tol,
                          config.tail_tol);
  };

  if (data.all_equal()) {
    // Supremum at ν = ∞: the limit is a point mass on the common value.
    result.nu_hat = config.nu_max;
    result.at_boundary = true;
    result.converged = false;
    result.warnings.push_back(
        "all observations are equal; likelihood increases without bound in nu, "
        "reporting nu_max");
  } else {
    const double s_lo = std::log(config.nu_min);
    const double s_hi = std::log(config.nu_max);
    const int n = config.scan_points;
    std::vector<double> grid(static_cast<std::size_t>(n));
    std::vector<double> values(grid.size());
    for (int i = 0; i < n; ++i) {
      grid[i] = s_lo + (s_hi - s_lo) * i / (n - 1);
      values[i] = -loglik_at(std::exp(grid[i]));
    }
    const auto best = static_cast<int>(
        std::min_element(values.begin(), values.end()) - values.begin());
    const double a = grid[std::max(best - 1, 0)];
    const double b = grid[std::min(best + 1, n - 1)];

    std::uintmax_t iterations = static_cast<std::uintmax_t>(config.max_iterations);
    // Golden-section search with parabolic steps over log ν.
    const int bits = std::max(
        8, static_cast<int>(std::ceil(-std::log2(config.log_nu_tol))));
    const auto [s_best, f_best] = boost::math::tools::brent_find_minima(
        [&](double s) { return -loglik_at(std::exp(s)); }, a, b,
        std::min(bits, std::numeric_limits<double>::digits / 2), iterations);
    result.iterations = static_cast<int>(iterations);

    double s_hat = s_best;
    double f_hat = f_best;
    if (values[best] < f_hat) {
      s_hat = grid[best];
      f_hat = values[best];
    }
    result.nu_hat = std::exp(s_hat);
    result.converged = iterations < static_cast<std::uintmax_t>(config.max_iterations);
    const double edge_tol = 4.0 * std::max(config.log_nu_tol, 1e-6);
    if (s_hat - s_lo <= edge_tol || s_hi - s_hat <= edge_tol) {
      result.at_boundary = true;
      result.converged = false;
      result.warnings.push_back("nu estimate is at the search boundary [" +
                                format_double(config.nu_min) + ", " +
                                format_double(config.nu_max) + "]");
    }
    if (!result.converged && !result.at_boundary) {
      result.warnings.push_back("nu search hit the iteration limit");
    }
  }

  const MeanCmp fitted(MeanParams{mu, result.nu_hat}, config.solve_tol,
                       config.tail_tol);
  result.loglik = loglik_at(result.nu_hat);
  result.aic = aic(result.loglik, 2);
  result.fitted_variance = fitted.moments().variance;
  return result;
}

EmpiricalBaseline empirical_baseline(const CountData& data) {
  EmpiricalBaseline out;
  const double n = static_cast<double>(data.size());
  CompensatedSum ll;
  for (const auto& [value, count] : data.frequencies()) {
    const double c = static_cast<double>(count);
    out.probabilities[value] = c / n;
    ll.add(c * std::log(c / n));
  }
  out.loglik = ll.value();
  out.parameters = static_cast<int>(out.probabilities.size()) - 1;
  out.aic = aic(out.loglik, out.parameters);
  return out;
}

}  // namespace cmpkit
