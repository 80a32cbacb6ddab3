#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cmpkit/error.hpp"
#include "cmpkit/fitting.hpp"
#include "cmpkit/kernel_smoother.hpp"
#include "cmpkit/mpcmp.hpp"

namespace py = pybind11;
using namespace cmpkit;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bindings for the cmpkit C++ library";

  static py::exception<Error> cmp_error(m, "CmpError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string msg = std::string(to_string(e.stage())) + ": " + e.what();
      PyErr_SetString(cmp_error.ptr(), msg.c_str());
    }
  });

  py::class_<MeanCmp>(m, "MeanCmp")
      .def(py::init([](double mu, double nu, double tol, double tail_tol) {
             return MeanCmp(MeanParams{mu, nu}, tol, tail_tol);
           }),
           py::arg("mu"), py::arg("nu"), py::arg("tol") = kDefaultSolveTol,
           py::arg("tail_tol") = kDefaultTailTol)
      .def_property_readonly("eta", &MeanCmp::eta)
      .def_property_readonly("support_max", &MeanCmp::support_max)
      .def("pmf", &MeanCmp::pmf)
      .def("log_pmf", &MeanCmp::log_pmf)
      .def("cdf", &MeanCmp::cdf)
      .def("quantile", &MeanCmp::quantile)
      .def("moments", [](const MeanCmp& d) {
        const Moments mo = d.moments();
        return py::make_tuple(mo.mean, mo.variance);
      });

  m.def("solve_eta", [](double mu, double nu, double tol) {
    return solve_eta(MeanParams{mu, nu}, tol);
  }, py::arg("mu"), py::arg("nu"), py::arg("tol") = kDefaultSolveTol);
  m.def("pmf", [](std::int64_t y, double mu, double nu) { return pmf(y, MeanParams{mu, nu}); },
        py::arg("y"), py::arg("mu"), py::arg("nu"));
  m.def("cdf", [](std::int64_t y, double mu, double nu) { return cdf(y, MeanParams{mu, nu}); },
        py::arg("y"), py::arg("mu"), py::arg("nu"));
  m.def("quantile",
        [](double p, double mu, double nu) { return quantile(p, MeanParams{mu, nu}); },
        py::arg("p"), py::arg("mu"), py::arg("nu"));
  m.def("sample", [](std::size_t n, double mu, double nu, std::uint64_t seed) {
    return sample(n, MeanParams{mu, nu}, seed);
  }, py::arg("n"), py::arg("mu"), py::arg("nu"), py::arg("seed"));
  m.def("limit_pmf", [](double mu) {
    const LimitPmf l = limit_pmf(mu);
    py::dict out;
    out[py::int_(l.lower_value)] = l.lower_prob;
    if (!l.degenerate) out[py::int_(l.upper_value)] = l.upper_prob;
    return out;
  }, py::arg("mu"));
  m.def("convergence_diagnostic",
        py::overload_cast<double, double>(&convergence_diagnostic), py::arg("mu"),
        py::arg("nu"));

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("mu_hat", &FitResult::mu_hat)
      .def_readonly("nu_hat", &FitResult::nu_hat)
      .def_readonly("loglik", &FitResult::loglik)
      .def_readonly("aic", &FitResult::aic)
      .def_readonly("converged", &FitResult::converged)
      .def_readonly("at_boundary", &FitResult::at_boundary)
      .def_readonly("fitted_variance", &FitResult::fitted_variance)
      .def_readonly("warnings", &FitResult::warnings);

  m.def("fit", [](std::vector<std::int64_t> counts) {
    return fit_mle(CountData(std::move(counts)));
  }, py::arg("counts"));
  m.def("empirical_baseline", [](std::vector<std::int64_t> counts) {
    const EmpiricalBaseline e = empirical_baseline(CountData(std::move(counts)));
    return py::make_tuple(e.probabilities, e.loglik, e.aic);
  }, py::arg("counts"));
  m.def("smooth", [](std::vector<std::int64_t> counts, double h, std::int64_t y_max,
                     bool renormalize) {
    return smooth(CountData(std::move(counts)), Bandwidth(h), y_max, renormalize).estimates;
  }, py::arg("counts"), py::arg("h"), py::arg("y_max"), py::arg("renormalize") = false);
}
