#include "cmpkit/lambda_grid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <istream>
#include <limits>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "cmpkit/error.hpp"
#include "cmpkit/format.hpp"

namespace cmpkit {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_knots(const std::vector<double>& knots, const char* name) {
  if (knots.empty()) throw DomainError(std::string(name) + " must be non-empty");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i])) {
      throw DomainError(std::string(name) + " must be finite");
    }
    if (i > 0 && !(knots[i] > knots[i - 1])) {
      throw DomainError(std::string(name) + " must be strictly increasing");
    }
  }
}

// Locate q in knots: cell index and weight in [0, 1], the weight measured
// after mapping both q and the knots through `scale`. Values within a few
// ulps of a knot snap to it so knot queries reproduce stored values exactly.
template <typename Scale>
std::pair<std::size_t, double> locate(const std::vector<double>& knots, double q,
                                      const char* axis, Scale scale) {
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (std::abs(q - knots[i]) <= 4.0 * kEps * std::max(1.0, std::abs(knots[i]))) {
      q = knots[i];
      break;
    }
  }
  if (!(q >= knots.front() && q <= knots.back())) {
    throw OutOfRangeError(std::string(axis) + " query " + format_double(q) +
                          " outside grid [" + format_double(knots.front()) +
                          ", " + format_double(knots.back()) + "]");
  }
  if (knots.size() == 1) return {0, 0.0};
  auto it = std::upper_bound(knots.begin(), knots.end(), q);
  std::size_t i = static_cast<std::size_t>(it - knots.begin());
  i = std::min(std::max<std::size_t>(i, 1), knots.size() - 1) - 1;
  const double lo = scale(knots[i]);
  const double t = (scale(q) - lo) / (scale(knots[i + 1]) - lo);
  return {i, std::clamp(t, 0.0, 1.0)};
}

nlohmann::ordered_json number_array(const std::vector<double>& values) {
  auto out = nlohmann::ordered_json::array();
  for (double v : values) out.push_back(format_double(v));
  return out;
}

std::vector<double> parse_array(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_array()) {
    throw ParseError(0, std::string("grid file: missing array '") + key + "'");
  }
  std::vector<double> out;
  for (const auto& item : doc.at(key)) {
    if (!item.is_string()) {
      throw ParseError(0, std::string("grid file: '") + key +
                              "' entries must be decimal strings");
    }
    try {
      out.push_back(parse_double(item.get<std::string>()));
    } catch (const DomainError& e) {
      throw ParseError(0, std::string("grid file: ") + e.what());
    }
  }
  return out;
}

}  // namespace

LambdaGrid build_grid(const std::vector<double>& mu_knots,
                      const std::vector<double>& nu_knots, double tol,
                      unsigned threads) {
  check_knots(mu_knots, "mu_knots");
  check_knots(nu_knots, "nu_knots");
  if (!(mu_knots.front() > 0.0)) throw DomainError("mu_knots must be > 0");
  if (nu_knots.front() < 0.0) throw DomainError("nu_knots must be >= 0");
  if (!(tol > 0.0)) throw DomainError("grid tolerance must be > 0");

  LambdaGrid grid;
  grid.mu_knots = mu_knots;
  grid.nu_knots = nu_knots;
  grid.solve_tolerance = tol;
  const std::size_t cells = grid.rows() * grid.cols();
  grid.eta_values.assign(cells, 0.0);
  std::vector<std::exception_ptr> failures(cells);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < cells; k = next++) {
      const MeanParams mp{mu_knots[k / grid.cols()], nu_knots[k % grid.cols()]};
      try {
        grid.eta_values[k] = solve_eta(mp, tol);
      } catch (...) {
        failures[k] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cells));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  for (std::size_t k = 0; k < cells; ++k) {
    if (!failures[k]) continue;
    const std::string where = "grid knot (mu=" +
                              format_double(mu_knots[k / grid.cols()]) +
                              ", nu=" + format_double(nu_knots[k % grid.cols()]) +
                              "): ";
    try {
      std::rethrow_exception(failures[k]);
    } catch (const Error& e) {
      throw Error(e.stage(), where + e.what());
    }
  }
  for (std::size_t r = 1; r < grid.rows(); ++r) {
    for (std::size_t c = 0; c < grid.cols(); ++c) {
      if (!(grid.at(r, c) > grid.at(r - 1, c))) {
        throw Error(Stage::grid, "solved eta is not increasing in mu at nu=" +
                                     format_double(nu_knots[c]));
      }
    }
  }
  return grid;
}

double interpolate_eta(const LambdaGrid& grid, const MeanParams& mp) {
  if (grid.eta_values.size() != grid.rows() * grid.cols() || grid.rows() == 0 ||
      grid.cols() == 0) {
    throw DomainError("malformed grid");
  }
  if (!(mp.mu > 0.0) || !std::isfinite(mp.mu)) {
    throw OutOfRangeError("mu must be positive and finite for grid lookup");
  }
  const auto [i, s] = locate(grid.mu_knots, mp.mu, "mu",
                             [](double v) { return std::log(v); });
  const auto [j, t] = locate(grid.nu_knots, mp.nu, "nu", [](double v) { return v; });
  const std::size_t i1 = grid.rows() > 1 ? i + 1 : i;
  const std::size_t j1 = grid.cols() > 1 ? j + 1 : j;
  if (s == 0.0 && t == 0.0) return grid.at(i, j);
  const double lower = (1.0 - t) * grid.at(i, j) + t * grid.at(i, j1);
  const double upper = (1.0 - t) * grid.at(i1, j) + t * grid.at(i1, j1);
  return (1.0 - s) * lower + s * upper;
}

std::vector<double> log_spaced_knots(double mu_min, double mu_max,
                                     std::size_t count) {
  if (!(mu_min > 0.0) || !(mu_max >= mu_min) || !std::isfinite(mu_max)) {
    throw DomainError("log-spaced knots need 0 < mu_min <= mu_max");
  }
  std::vector<double> knots = linear_knots(std::log(mu_min), std::log(mu_max), count);
  for (double& k : knots) k = std::exp(k);
  knots.front() = mu_min;
  knots.back() = mu_max;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i] > knots[i - 1])) {
      throw DomainError("log-spaced knots are too dense to be distinct");
    }
  }
  return knots;
}

std::vector<double> linear_knots(double lo, double hi, std::size_t count) {
  if (count == 0) throw DomainError("knot count must be >= 1");
  if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo ||
      (count > 1 && !(hi > lo))) {
    throw DomainError("knot range must be finite with lo < hi");
  }
  if (count == 1) return {lo};
  std::vector<double> knots(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    knots[i] = lo + step * static_cast<double>(i);
  }
  knots.back() = hi;
  return knots;
}

void write_grid(std::ostream& out, const LambdaGrid& grid) {
  nlohmann::ordered_json doc;
  doc["format"] = "cmpkit lambda grid";
  doc["version"] = grid.version;
  doc["axes"] = "rows: mu_knots (interpolated in log mu), cols: nu_knots, eta_values row-major";
  doc["solve_tolerance"] = format_double(grid.solve_tolerance);
  doc["mu_knots"] = number_array(grid.mu_knots);
  doc["nu_knots"] = number_array(grid.nu_knots);
  doc["eta_values"] = number_array(grid.eta_values);
  out << doc.dump(2) << '\n';
}

LambdaGrid read_grid(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, std::string("grid file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("version") || !doc["version"].is_string()) {
    throw ParseError(0, "grid file: missing version");
  }
  LambdaGrid grid;
  grid.version = doc["version"].get<std::string>();
  if (grid.version != kGridFormatVersion) {
    throw ParseError(0, "grid file: unsupported version '" + grid.version + "'");
  }
  if (!doc.contains("solve_tolerance") || !doc["solve_tolerance"].is_string()) {
    throw ParseError(0, "grid file: missing solve_tolerance");
  }
  try {
    grid.solve_tolerance = parse_double(doc["solve_tolerance"].get<std::string>());
  } catch (const DomainError& e) {
    throw ParseError(0, std::string("grid file: ") + e.what());
  }
  grid.mu_knots = parse_array(doc, "mu_knots");
  grid.nu_knots = parse_array(doc, "nu_knots");
  grid.eta_values = parse_array(doc, "eta_values");
  try {
    check_knots(grid.mu_knots, "mu_knots");
    check_knots(grid.nu_knots, "nu_knots");
    if (!(grid.mu_knots.front() > 0.0)) throw DomainError("mu_knots must be > 0");
  } catch (const DomainError& e) {
    throw ParseError(0, std::string("grid file: ") + e.what());
  }
  if (grid.eta_values.size() != grid.rows() * grid.cols()) {
    throw ParseError(0, "grid file: eta_values has wrong length");
  }
  return grid;
}

}  // namespace cmpkit
