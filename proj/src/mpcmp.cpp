#include "cmpkit/mpcmp.hpp"

#include <algorithm>
#include <cmath>

#include "cmpkit/error.hpp"
#include "cmpkit/numeric.hpp"

namespace cmpkit {

double LimitPmf::mass(std::int64_t y) const noexcept {
  if (y == lower_value) return lower_prob;
  if (y == upper_value) return upper_prob;
  return 0.0;
}

LimitPmf limit_pmf(double mu) {
  if (!std::isfinite(mu) || mu < 0.0) {
    throw DomainError("limit_pmf requires finite mu >= 0");
  }
  const double floor_mu = std::floor(mu);
  const auto lower = static_cast<std::int64_t>(floor_mu);
  if (mu == floor_mu) return {lower, lower, 1.0, 0.0, true};
  return {lower, lower + 1, (floor_mu + 1.0) - mu, mu - floor_mu, false};
}

MeanCmp::MeanCmp(const MeanParams& mp, double tol, double tail_tol)
    : params_(mp) {
  SolveOptions options;
  options.tol = tol;
  options.tail_tol = tail_tol;
  const double eta = solve_eta(mp, options);
  table_ = pmf_table(CmpParams{eta, mp.nu}, tail_tol);

  cdf_.resize(table_.size());
  CompensatedSum running;
  for (std::size_t y = 0; y < cdf_.size(); ++y) {
    running.add(std::exp(table_.log_probs[y]));
    cdf_[y] = running.value();
  }
  const double total = cdf_.back();
  for (double& c : cdf_) c = std::min(1.0, c / total);
  cdf_.back() = 1.0;
}

double MeanCmp::log_pmf(std::int64_t y) const {
  if (y < 0) throw DomainError("pmf requires y >= 0");
  if (y <= table_.y_hi) return table_.log_probs[static_cast<std::size_t>(y)];
  const double steps = static_cast<double>(y - table_.y_hi);
  return table_.log_probs.back() + steps * table_.params.eta -
         table_.params.nu * log_factorial_ratio(table_.y_hi, y);
}

double MeanCmp::pmf(std::int64_t y) const { return std::exp(log_pmf(y)); }

double MeanCmp::cdf(std::int64_t y) const {
  if (y < 0) throw DomainError("cdf requires y >= 0");
  if (y >= table_.y_hi) return 1.0;
  return cdf_[static_cast<std::size_t>(y)];
}

std::int64_t MeanCmp::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile requires p in [0, 1]");
  if (p == 0.0) {
    for (std::size_t y = 0; y < table_.size(); ++y) {
      if (std::exp(table_.log_probs[y]) > 0.0) return static_cast<std::int64_t>(y);
    }
    return table_.y_hi;
  }
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), p);
  if (it == cdf_.end()) return table_.y_hi;
  return static_cast<std::int64_t>(it - cdf_.begin());
}

Moments MeanCmp::moments() const { return cmpkit::moments(table_); }

SampleStream::SampleStream(const MeanParams& mp, std::uint64_t seed, double tol,
                           double tail_tol)
    : dist_(mp, tol, tail_tol), seed_(seed), uniform_(seed) {}

std::int64_t SampleStream::next() {
  // Smallest y with cdf(y) > u; such a y always carries positive mass.
  const double u = uniform_.next();
  std::int64_t lo = 0;
  std::int64_t hi = dist_.support_max();
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (dist_.cdf(mid) > u) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

std::vector<std::int64_t> SampleStream::take(std::size_t n) {
  std::vector<std::int64_t> out(n);
  for (auto& v : out) v = next();
  return out;
}

double pmf(std::int64_t y, const MeanParams& mp) { return MeanCmp(mp).pmf(y); }

double cdf(std::int64_t y, const MeanParams& mp) { return MeanCmp(mp).cdf(y); }

std::int64_t quantile(double p, const MeanParams& mp) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile requires p in [0, 1]");
  return MeanCmp(mp).quantile(p);
}

std::vector<std::int64_t> sample(std::size_t n, const MeanParams& mp,
                                 std::uint64_t seed) {
  if (n == 0) throw DomainError("sample size must be >= 1");
  return SampleStream(mp, seed).take(n);
}

double convergence_diagnostic(const MeanCmp& dist) {
  const LimitPmf limit = limit_pmf(dist.params().mu);
  const PmfTable& table = dist.table();
  CompensatedSum tv;
  for (std::int64_t y = 0; y <= table.y_hi; ++y) {
    tv.add(std::abs(table.prob(y) - limit.mass(y)));
  }
  for (std::int64_t y : {limit.lower_value, limit.upper_value}) {
    if (y > table.y_hi && (y == limit.lower_value || !limit.degenerate)) {
      tv.add(limit.mass(y));
    }
  }
  return std::clamp(0.5 * tv.value(), 0.0, 1.0);
}

double convergence_diagnostic(double mu, double nu) {
  return convergence_diagnostic(MeanCmp(MeanParams{mu, nu}));
}

}  // namespace cmpkit
