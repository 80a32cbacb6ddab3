#include "cmpkit/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "cmpkit/error.hpp"

namespace cmpkit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEulerGamma = 0.5772156649015328606;
constexpr double kHalfLog2Pi = 0.91893853320467274178;

// log(k!) for k = 0..20
constexpr std::array<double, 21> kLogFactorial = {
    0.0,
    0.0,
    0.69314718055994530942,
    1.7917594692280550008,
    3.1780538303479456196,
    4.7874917427820459942,
    6.5792512120101009951,
    8.5251613610654143002,
    10.604602902745250228,
    12.801827480081469611,
    15.104412573075515295,
    17.502307845873885839,
    19.98721449566188615,
    22.552163853123422886,
    25.1912211827386815,
    27.899271383840891566,
    30.671860106080672804,
    33.505073450136888884,
    36.395445208033053576,
    39.339884187199494036,
    42.33561646075348503,
};

// ζ(k) − 1 for k = 2..31
constexpr std::array<double, 30> kZetaMinusOne = {
    0.64493406684822643647,    0.2020569031595942854,
    0.082323233711138191516,   0.036927755143369926331,
    0.017343061984449139715,   0.0083492773819228268398,
    0.0040773561979443393787,  0.0020083928260822144179,
    0.00099457512781808533715, 0.0004941886041194645587,
    0.00024608655330804829864, 0.00012271334757848914675,
    6.1248135058704829259e-5,  3.0588236307020493552e-5,
    1.5282259408651871733e-5,  7.6371976378997622736e-6,
    3.8172932649998398565e-6,  1.9082127165539389257e-6,
    9.5396203387279611315e-7,  4.7693298678780646312e-7,
    2.3845050272773299e-7,     1.1921992596531107307e-7,
    5.9608189051259479612e-8,  2.9803503514652280186e-8,
    1.4901554828365041235e-8,  7.450711789835429492e-9,
    3.7253340247884570548e-9,  1.8626597235130490064e-9,
    9.3132743241966818287e-10, 4.656629065033784073e-10,
};

// log Γ(2 + z) = (1 − γ)z + Σ_{k≥2} (−z)^k (ζ(k) − 1)/k, |z| ≤ 1/2.
double log_gamma_near_two(double z) {
  double sum = 0.0;
  double power = -z;
  for (std::size_t i = 0; i < kZetaMinusOne.size(); ++i) {
    power *= -z;
    const double k = static_cast<double>(i + 2);
    sum += power * kZetaMinusOne[i] / k;
  }
  return (1.0 - kEulerGamma) * z + sum;
}

// Stirling series, x ≥ 10.
double log_gamma_stirling(double x) {
  static constexpr std::array<double, 8> kCoeff = {
      1.0 / 12.0,          -1.0 / 360.0,     1.0 / 1260.0,
      -1.0 / 1680.0,       1.0 / 1188.0,     -691.0 / 360360.0,
      1.0 / 156.0,         -3617.0 / 122400.0,
  };
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 0.0;
  double power = inv;
  for (double c : kCoeff) {
    series += c * power;
    power *= inv2;
  }
  return (x - 0.5) * std::log(x) - x + kHalfLog2Pi + series;
}

}  // namespace

LogValue::LogValue(double value) : value_(value) {
  if (std::isnan(value) || value == kInf) {
    throw DomainError("LogValue must be finite or -inf");
  }
}

LogValue LogValue::zero() noexcept {
  LogValue v;
  v.value_ = -kInf;
  return v;
}

double LogValue::linear() const noexcept { return std::exp(value_); }

bool LogValue::is_zero() const noexcept { return value_ == -kInf; }

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw DomainError("log_gamma requires x > 0, got " + std::to_string(x));
  }
  if (x == kInf) return kInf;
  if (x <= 21.0 && x == std::floor(x)) {
    return kLogFactorial[static_cast<std::size_t>(x) - 1];
  }
  if (x >= 10.0) return log_gamma_stirling(x);
  if (x < 0.5) {
    // Γ(x) = Γ(x + 1)/x
    return log_gamma(x + 1.0) - std::log(x);
  }
  if (x < 1.5) {
    // Γ(x) = Γ(x + 1)/x with x + 1 in [1.5, 2.5)
    return log_gamma_near_two(x - 1.0) - std::log1p(x - 1.0);
  }
  if (x <= 2.5) return log_gamma_near_two(x - 2.0);
  // Reduce into [1.5, 2.5): Γ(x) = Γ(r)·r(r+1)…(x−1)
  double r = x;
  double product = 1.0;
  while (r > 2.5) {
    r -= 1.0;
    product *= r;
  }
  return log_gamma_near_two(r - 2.0) + std::log(product);
}

double digamma(double x) {
  if (!(x > 0.0)) {
    throw DomainError("digamma requires x > 0, got " + std::to_string(x));
  }
  if (x == kInf) return kInf;
  double shift = 0.0;
  while (x < 6.0) {
    shift += 1.0 / x;
    x += 1.0;
  }
  // ψ(x) ~ log x − 1/(2x) − Σ B_2k/(2k x^2k)
  static constexpr std::array<double, 12> kCoeff = {
      1.0 / 12.0,           -1.0 / 120.0,        1.0 / 252.0,
      -1.0 / 240.0,         1.0 / 132.0,         -691.0 / 32760.0,
      1.0 / 12.0,           -3617.0 / 8160.0,    43867.0 / 14364.0,
      -174611.0 / 6600.0,   854513.0 / 3036.0,   -236364091.0 / 65520.0,
  };
  const double inv2 = 1.0 / (x * x);
  double series = 0.0;
  double power = inv2;
  for (double c : kCoeff) {
    series += c * power;
    power *= inv2;
  }
  return std::log(x) - 0.5 / x - series - shift;
}

double log_sum_exp(std::span<const double> terms) {
  if (terms.empty()) throw DomainError("log_sum_exp of an empty sequence");
  double peak = -kInf;
  for (double t : terms) {
    if (std::isnan(t) || t == kInf) {
      throw DomainError("log_sum_exp terms must be finite or -inf");
    }
    peak = std::max(peak, t);
  }
  if (peak == -kInf) return -kInf;
  CompensatedSum sum;
  for (double t : terms) sum.add(std::exp(t - peak));
  return peak + std::log(sum.value());
}

double log_poisson_weight(double mu, std::int64_t y) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw DomainError("log_poisson_weight requires finite mu > 0");
  }
  if (y < 0) throw DomainError("log_poisson_weight requires y >= 0");
  const double yd = static_cast<double>(y);
  return yd * std::log(mu) - log_gamma(yd + 1.0);
}

double log_factorial_ratio(std::int64_t a, std::int64_t b) {
  if (a < 0 || b < a) throw DomainError("log_factorial_ratio requires 0 <= a <= b");
  if (b - a <= 64) {
    CompensatedSum sum;
    for (std::int64_t k = a + 1; k <= b; ++k) {
      sum.add(std::log(static_cast<double>(k)));
    }
    return sum.value();
  }
  return log_gamma(static_cast<double>(b) + 1.0) -
         log_gamma(static_cast<double>(a) + 1.0);
}

}  // namespace cmpkit
