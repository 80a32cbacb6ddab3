#include "cmpkit/cli.hpp"

#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmpkit/bench.hpp"
#include "cmpkit/error.hpp"
#include "cmpkit/fitting.hpp"
#include "cmpkit/format.hpp"
#include "cmpkit/kernel_smoother.hpp"
#include "cmpkit/lambda_grid.hpp"
#include "cmpkit/mpcmp.hpp"

namespace cmpkit::cli {
namespace {

enum class Format { csv, json };

struct Common {
  std::string format = "csv";
  double tol = kDefaultSolveTol;
  double tail_tol = kDefaultTailTol;
  std::string output;

  Format fmt() const { return format == "json" ? Format::json : Format::csv; }
};

struct Options {
  double mu = 0.0;
  double nu = 1.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string input;
  std::optional<std::int64_t> y_max;
  std::optional<double> bandwidth;
  std::vector<double> cv_grid;
  bool renormalize = false;
  std::vector<double> nus;
  std::vector<double> mu_range;
  std::vector<double> nu_range;
  std::vector<std::size_t> knots;
  unsigned threads = 0;
  int repeats = 3;
};

// JSON numbers use the same 17-digit text as CSV; non-finite values map to null.
std::string jnum(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

std::string jstr(const std::string& s) { return nlohmann::json(s).dump(); }

std::string jbool(bool b) { return b ? "true" : "false"; }

void write_pmf_csv(std::ostream& os, std::int64_t y_lo, const std::vector<double>& p) {
  os << "y,probability\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    os << (y_lo + static_cast<std::int64_t>(i)) << ',' << format_double(p[i]) << '\n';
  }
}

std::string pmf_json(std::int64_t y_lo, const std::vector<double>& p) {
  std::string s = "{";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) s += ", ";
    s += '"' + std::to_string(y_lo + static_cast<std::int64_t>(i)) + "\": " + jnum(p[i]);
  }
  return s + "}";
}

std::vector<double> table_probs(const MeanCmp& dist, std::optional<std::int64_t> y_max) {
  const std::int64_t hi = y_max ? *y_max : dist.support_max();
  if (hi < 0) throw DomainError("--y-max must be >= 0");
  std::vector<double> p(static_cast<std::size_t>(hi) + 1);
  for (std::int64_t y = 0; y <= hi; ++y) p[static_cast<std::size_t>(y)] = dist.pmf(y);
  return p;
}

void emit_pmf(std::ostream& os, Format f, const std::vector<double>& p) {
  if (f == Format::json) {
    os << pmf_json(0, p) << '\n';
  } else {
    write_pmf_csv(os, 0, p);
  }
}

void emit_log_lambda(std::ostream& os, Format f, double eta) {
  if (f == Format::json) {
    os << "{\"log_lambda\": " << jnum(eta) << "}\n";
  } else {
    os << "log_lambda\n" << format_double(eta) << '\n';
  }
}

void cmd_pmf(const Options& o, const Common& c, std::ostream& os) {
  const MeanCmp dist(MeanParams{o.mu, o.nu}, c.tol, c.tail_tol);
  emit_pmf(os, c.fmt(), table_probs(dist, o.y_max));
}

void cmd_solve(const Options& o, const Common& c, std::ostream& os) {
  SolveOptions so;
  so.tol = c.tol;
  so.tail_tol = c.tail_tol;
  emit_log_lambda(os, c.fmt(), solve_eta(MeanParams{o.mu, o.nu}, so));
}

void cmd_sample(const Options& o, const Common& c, std::ostream& os) {
  if (o.n == 0) throw DomainError("--n must be >= 1");
  SampleStream stream(MeanParams{o.mu, o.nu}, o.seed, c.tol, c.tail_tol);
  const auto draws = stream.take(o.n);
  if (c.fmt() == Format::json) {
    os << "{\"seed\": " << o.seed << ", \"draws\": [";
    for (std::size_t i = 0; i < draws.size(); ++i) os << (i ? ", " : "") << draws[i];
    os << "]}\n";
  } else {
    os << "value\n";
    for (auto d : draws) os << d << '\n';
  }
}

void cmd_fit(const Options& o, const Common& c, std::ostream& os) {
  const CountData data = read_counts_file(o.input);
  FitConfig config;
  config.solve_tol = c.tol;
  config.tail_tol = c.tail_tol;
  const FitResult r = fit_mle(data, config);
  const EmpiricalBaseline e = empirical_baseline(data);
  os << "{\"n\": " << data.size() << ", \"mu_hat\": " << jnum(r.mu_hat)
     << ", \"nu_hat\": " << jnum(r.nu_hat) << ", \"loglik\": " << jnum(r.loglik)
     << ", \"aic\": " << jnum(r.aic)
     << ", \"fitted_variance\": " << jnum(r.fitted_variance)
     << ", \"sample_variance\": " << jnum(data.sample_variance())
     << ", \"converged\": " << jbool(r.converged)
     << ", \"at_boundary\": " << jbool(r.at_boundary)
     << ", \"iterations\": " << r.iterations << ", \"warnings\": [";
  for (std::size_t i = 0; i < r.warnings.size(); ++i) {
    os << (i ? ", " : "") << jstr(r.warnings[i]);
  }
  os << "], \"empirical\": {\"probabilities\": {";
  bool first = true;
  for (const auto& [y, p] : e.probabilities) {
    os << (first ? "" : ", ") << '"' << y << "\": " << jnum(p);
    first = false;
  }
  os << "}, \"loglik\": " << jnum(e.loglik) << ", \"aic\": " << jnum(e.aic)
     << ", \"parameters\": " << e.parameters << "}}\n";
}

void cmd_limit(const Options& o, const Common& c, std::ostream& os) {
  const LimitPmf l = limit_pmf(o.mu);
  std::vector<std::pair<std::int64_t, double>> rows{{l.lower_value, l.lower_prob}};
  if (!l.degenerate) rows.emplace_back(l.upper_value, l.upper_prob);
  if (c.fmt() == Format::json) {
    os << '{';
    for (std::size_t i = 0; i < rows.size(); ++i) {
      os << (i ? ", " : "") << '"' << rows[i].first << "\": " << jnum(rows[i].second);
    }
    os << "}\n";
  } else {
    os << "y,probability\n";
    for (const auto& [y, p] : rows) os << y << ',' << format_double(p) << '\n';
  }
}

std::vector<double> nu_list(const Options& o, bool has_nu) {
  if (!o.nus.empty()) return o.nus;
  if (has_nu) return {o.nu};
  throw DomainError("give --nu or --nus");
}

void cmd_diag(const Options& o, const Common& c, std::ostream& os,
              const std::vector<double>& nus) {
  std::vector<double> tv;
  for (double nu : nus) {
    tv.push_back(convergence_diagnostic(MeanCmp(MeanParams{o.mu, nu}, c.tol, c.tail_tol)));
  }
  if (c.fmt() == Format::json) {
    os << "{\"mu\": " << jnum(o.mu) << ", \"diagnostics\": [";
    for (std::size_t i = 0; i < nus.size(); ++i) {
      os << (i ? ", " : "") << "{\"nu\": " << jnum(nus[i])
         << ", \"total_variation\": " << jnum(tv[i]) << '}';
    }
    os << "]}\n";
  } else {
    os << "nu,total_variation\n";
    for (std::size_t i = 0; i < nus.size(); ++i) {
      os << format_double(nus[i]) << ',' << format_double(tv[i]) << '\n';
    }
  }
}

void cmd_grid_build(const Options& o, const Common& c, std::ostream& os) {
  const std::size_t n_mu = o.knots.at(0);
  const std::size_t n_nu = o.knots.size() > 1 ? o.knots[1] : o.knots[0];
  const auto mu = log_spaced_knots(o.mu_range.at(0), o.mu_range.at(1), n_mu);
  const auto nu = linear_knots(o.nu_range.at(0), o.nu_range.at(1), n_nu);
  write_grid(os, build_grid(mu, nu, c.tol, o.threads));
}

void cmd_grid_eval(const Options& o, const Common& c, std::ostream& os) {
  std::ifstream in(o.input);
  if (!in) throw ParseError(0, "cannot open '" + o.input + "'");
  const LambdaGrid grid = read_grid(in);
  emit_log_lambda(os, c.fmt(), interpolate_eta(grid, MeanParams{o.mu, o.nu}));
}

void cmd_smooth(const Options& o, const Common& c, std::ostream& os) {
  const CountData data = read_counts_file(o.input);
  const std::int64_t y_max = o.y_max ? *o.y_max : data.max();
  if (o.bandwidth.has_value() == !o.cv_grid.empty()) {
    throw DomainError("give exactly one of --bandwidth or --cv-grid");
  }
  const Bandwidth bw = o.bandwidth ? Bandwidth(*o.bandwidth)
                                   : cv_bandwidth(data, o.cv_grid, y_max);
  const SmoothedPmf s = smooth(data, bw, y_max, o.renormalize);
  if (c.fmt() == Format::json) {
    os << "{\"bandwidth\": " << jnum(bw.h()) << ", \"nu\": " << jnum(bw.nu_of_h())
       << ", \"renormalized\": " << jbool(s.renormalized)
       << ", \"raw_total_mass\": " << jnum(s.raw_total_mass)
       << ", \"estimates\": " << pmf_json(0, s.estimates) << "}\n";
  } else {
    write_pmf_csv(os, 0, s.estimates);
  }
}

void cmd_figure1(const Options& o, const Common& c, std::ostream& os) {
  const double mu = o.mu;
  const std::vector<double> nus = o.nus.empty() ? std::vector<double>{1, 5, 10, 25, 100}
                                                : o.nus;
  if (c.fmt() == Format::json) os << "{\"mu\": " << jnum(mu) << ", \"blocks\": [";
  for (std::size_t i = 0; i < nus.size(); ++i) {
    const MeanCmp dist(MeanParams{mu, nus[i]}, c.tol, c.tail_tol);
    const auto p = table_probs(dist, o.y_max);
    if (c.fmt() == Format::json) {
      os << (i ? ", " : "") << "{\"nu\": " << jnum(nus[i]) << ", \"pmf\": " << pmf_json(0, p)
         << '}';
    } else {
      if (i > 0) os << '\n';
      os << "# nu=" << format_double(nus[i]) << '\n';
      write_pmf_csv(os, 0, p);
    }
  }
  if (c.fmt() == Format::json) os << "]}\n";
}

void cmd_bench(const Options& o, const Common& c, std::ostream& os) {
  const std::size_t n = o.n == 0 ? 500 : o.n;
  const BracketBenchmark b = benchmark_brackets(bracket_workload(n), o.repeats, c.tol);
  if (c.fmt() == Format::json) {
    os << "{\"solves\": " << b.solves
       << ", \"bracketed_median_seconds\": " << jnum(b.bracketed_median_seconds)
       << ", \"expansion_median_seconds\": " << jnum(b.expansion_median_seconds)
       << ", \"bracketed_median_evaluations\": " << jnum(b.bracketed_median_evaluations)
       << ", \"expansion_median_evaluations\": " << jnum(b.expansion_median_evaluations)
       << ", \"speedup\": " << jnum(b.speedup)
       << ", \"max_eta_disagreement\": " << jnum(b.max_eta_disagreement) << "}\n";
  } else {
    os << "solves,bracketed_median_seconds,expansion_median_seconds,"
          "bracketed_median_evaluations,expansion_median_evaluations,speedup,"
          "max_eta_disagreement\n"
       << b.solves << ',' << format_double(b.bracketed_median_seconds) << ','
       << format_double(b.expansion_median_seconds) << ','
       << format_double(b.bracketed_median_evaluations) << ','
       << format_double(b.expansion_median_evaluations) << ','
       << format_double(b.speedup) << ',' << format_double(b.max_eta_disagreement)
       << '\n';
  }
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--tol", c.tol, "Solver tolerance on the mean")
      ->check(CLI::PositiveNumber);
  sub->add_option("--tail-tol", c.tail_tol, "Series truncation tolerance")
      ->check(CLI::Range(1e-300, 1e-1));
  sub->add_option("--output", c.output, "Write output to this file instead of stdout");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mean-parametrized Conway-Maxwell-Poisson toolkit", "cmpkit"};
  app.require_subcommand(1);
  Common c;
  Options o;

  auto mu_opt = [&](CLI::App* s, bool required) {
    auto* opt = s->add_option("--mu", o.mu, "Target mean")->check(CLI::NonNegativeNumber);
    if (required) opt->required();
  };
  auto y_max_opt = [&](CLI::App* s) {
    s->add_option("--y-max", o.y_max, "Largest y to report")->check(CLI::NonNegativeNumber);
  };
  auto* nu_flag = static_cast<CLI::Option*>(nullptr);

  auto* pmf = app.add_subcommand("pmf", "Probability mass table");
  mu_opt(pmf, true);
  pmf->add_option("--nu", o.nu, "Dispersion")->required()->check(CLI::NonNegativeNumber);
  y_max_opt(pmf);

  auto* solve = app.add_subcommand("solve", "Solve log(lambda) for a target mean");
  mu_opt(solve, true);
  solve->add_option("--nu", o.nu, "Dispersion")->required()->check(CLI::NonNegativeNumber);

  auto* sample = app.add_subcommand("sample", "Seeded inverse-cdf draws");
  mu_opt(sample, true);
  sample->add_option("--nu", o.nu, "Dispersion")->required()->check(CLI::NonNegativeNumber);
  sample->add_option("--n", o.n, "Number of draws")->required()->check(CLI::PositiveNumber);
  sample->add_option("--seed", o.seed, "Generator seed")->required();

  auto* fit = app.add_subcommand("fit", "Maximum-likelihood fit of a counts file");
  fit->add_option("--input", o.input, "Counts, one per line")->required();

  auto* limit = app.add_subcommand("limit", "Large-nu limiting pmf");
  mu_opt(limit, true);

  auto* diag = app.add_subcommand("diag", "Total-variation distance to the limit");
  mu_opt(diag, true);
  auto* diag_nu =
      diag->add_option("--nu", o.nu, "Dispersion")->check(CLI::NonNegativeNumber);
  diag->add_option("--nus", o.nus, "Comma-separated dispersions")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber)
      ->excludes(diag_nu);
  nu_flag = diag_nu;

  auto* grid_build = app.add_subcommand("grid-build", "Precompute a log(lambda) grid");
  grid_build->add_option("--mu-range", o.mu_range, "mu_min,mu_max")
      ->required()
      ->delimiter(',')
      ->expected(2)
      ->check(CLI::PositiveNumber);
  grid_build->add_option("--nu-range", o.nu_range, "nu_min,nu_max")
      ->required()
      ->delimiter(',')
      ->expected(2)
      ->check(CLI::NonNegativeNumber);
  grid_build->add_option("--knots", o.knots, "Knot counts n_mu[,n_nu]")
      ->required()
      ->delimiter(',')
      ->expected(1, 2)
      ->check(CLI::PositiveNumber);
  grid_build->add_option("--threads", o.threads, "Worker threads (0 = all cores)");

  auto* grid_eval = app.add_subcommand("grid-eval", "Interpolate log(lambda) from a grid");
  grid_eval->add_option("--input", o.input, "Grid file")->required();
  mu_opt(grid_eval, true);
  grid_eval->add_option("--nu", o.nu, "Dispersion")->required();

  auto* smooth_cmd = app.add_subcommand("smooth", "Discrete kernel smoothing");
  smooth_cmd->add_option("--input", o.input, "Counts, one per line")->required();
  auto* bw_opt = smooth_cmd->add_option("--bandwidth", o.bandwidth, "Bandwidth h")
                     ->check(CLI::PositiveNumber);
  smooth_cmd->add_option("--cv-grid", o.cv_grid, "Comma-separated candidate bandwidths")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->excludes(bw_opt);
  y_max_opt(smooth_cmd);
  smooth_cmd->add_flag("--renormalize", o.renormalize, "Rescale estimates to sum to 1");

  auto* figure1 = app.add_subcommand("figure1", "pmf blocks across dispersions");
  o.mu = 4.321;
  figure1->add_option("--mu", o.mu, "Target mean")->check(CLI::NonNegativeNumber);
  figure1->add_option("--nus", o.nus, "Comma-separated dispersions")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber);
  y_max_opt(figure1);

  auto* bench = app.add_subcommand("bench", "Closed-form vs expansion-only bracket timing");
  bench->add_option("--n", o.n, "Workload size (default 500)");
  bench->add_option("--repeats", o.repeats, "Passes per strategy")
      ->check(CLI::PositiveNumber);

  for (auto* s : app.get_subcommands({})) add_common(s, c);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::ostringstream buffer;
  try {
    if (pmf->parsed()) cmd_pmf(o, c, buffer);
    else if (solve->parsed()) cmd_solve(o, c, buffer);
    else if (sample->parsed()) cmd_sample(o, c, buffer);
    else if (fit->parsed()) cmd_fit(o, c, buffer);
    else if (limit->parsed()) cmd_limit(o, c, buffer);
    else if (diag->parsed()) cmd_diag(o, c, buffer, nu_list(o, nu_flag->count() > 0));
    else if (grid_build->parsed()) cmd_grid_build(o, c, buffer);
    else if (grid_eval->parsed()) cmd_grid_eval(o, c, buffer);
    else if (smooth_cmd->parsed()) cmd_smooth(o, c, buffer);
    else if (figure1->parsed()) cmd_figure1(o, c, buffer);
    else if (bench->parsed()) cmd_bench(o, c, buffer);
  } catch (const Error& e) {
    err << "error: " << to_string(e.stage()) << ": " << e.what() << '\n';
    const bool usage = e.stage() == Stage::domain || e.stage() == Stage::parse;
    return usage ? kExitUsage : kExitNumerical;
  }

  if (c.output.empty()) {
    out << buffer.str();
    return kExitOk;
  }
  std::ofstream file(c.output, std::ios::binary);
  if (!file || !(file << buffer.str()) || !file.flush()) {
    err << "error: output: cannot write '" << c.output << "'\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace cmpkit::cli
