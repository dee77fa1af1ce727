// Python module eplab._eplab: thin wrappers returning plain dicts and lists.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "cli.hpp"
#include "eplab/constants.hpp"
#include "eplab/dual.hpp"
#include "eplab/emulsion.hpp"
#include "eplab/error.hpp"
#include "eplab/interface.hpp"
#include "eplab/lattice_paths.hpp"
#include "eplab/phase.hpp"

namespace py = pybind11;
using namespace eplab;

namespace {

InteractionParams params(double alpha, double beta, bool shifted) {
  return {alpha, beta, shifted ? Convention::Shifted : Convention::Unshifted};
}

py::dict entropy_dict(const EntropyEstimate& e) {
  py::dict d;
  d["value"] = e.value;
  d["error_bound"] = e.error_bound;
  d["sizes"] = e.sizes;
  d["finite_values"] = e.finite_values;
  d["partial"] = e.partial;
  return d;
}

}  // namespace

PYBIND11_MODULE(_eplab, m) {
  m.doc() = "Copolymer-in-emulsion free energies";
  m.attr("__version__") = EPLAB_VERSION;
  m.attr("varpi") = kVarpi;
  m.attr("varsigma") = kVarsigma;

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<DependencyError>(m, "DependencyError", PyExc_RuntimeError);

  m.def("kappa_closed_b1", &kappa_closed_b1, py::arg("a"));
  m.def("count_crossing_paths", [](int L, double a, double b) { return count_crossing_paths(CrossingSpec::from_ratios(L, a, b)); },
        py::arg("L"), py::arg("a"), py::arg("b"), "ln of the number of aL-step crossings of an L x L block.");
  m.def("count_interface_returns", [](int L, double mu) { return count_interface_returns(InterfaceWalkSpec::from_ratio(L, mu)); },
        py::arg("L"), py::arg("mu"));
  m.def("kappa_estimate", [](double a, double b, std::vector<int> sizes) { return entropy_dict(kappa_estimate(a, b, sizes)); },
        py::arg("a"), py::arg("b"), py::arg("sizes") = std::vector<int>{32, 64, 96});
  m.def("kappa_hat_estimate", [](double mu, std::vector<int> sizes) { return entropy_dict(kappa_hat_estimate(mu, sizes)); },
        py::arg("mu"), py::arg("sizes") = std::vector<int>{32, 64, 96});

  m.def(
      "phi_estimate",
      [](double alpha, double beta, double mu, std::vector<int> sizes, int replicas, std::uint64_t seed, bool shifted,
         int threads) {
        const auto e = phi_estimate(params(alpha, beta, shifted), mu, sizes, replicas, {seed, {}}, threads);
        py::dict d;
        d["mean"] = e.mean;
        d["stderr"] = e.stderr_;
        d["drift"] = e.drift;
        d["values"] = e.values;
        return d;
      },
      py::arg("alpha"), py::arg("beta"), py::arg("mu"), py::arg("sizes") = std::vector<int>{32}, py::arg("replicas") = 32,
      py::arg("seed") = 7, py::arg("shifted") = true, py::arg("threads") = 1);

  m.def(
      "u_estimate",
      [](double alpha, double beta, double lambda, std::vector<int> sizes, int replicas, std::uint64_t seed, bool shifted,
         int threads) {
        const auto e = u_estimate(params(alpha, beta, shifted), lambda, sizes, replicas, {seed, {}}, threads, sizes.size() >= 3);
        py::dict d;
        d["value"] = e.value;
        d["stderr"] = e.stderr_;
        d["extrapolated"] = e.extrapolated;
        return d;
      },
      py::arg("alpha"), py::arg("beta"), py::arg("lambda_"), py::arg("sizes") = std::vector<int>{32}, py::arg("replicas") = 32,
      py::arg("seed") = 7, py::arg("shifted") = true, py::arg("threads") = 1);

  m.def(
      "legendre_forward",
      [](std::vector<double> rho, std::vector<double> phi, double lambda) {
        const auto r = legendre_forward(rho, phi, lambda);
        return py::make_tuple(r.value, r.argument, r.grid_bound);
      },
      py::arg("rho"), py::arg("phi_of_inv_rho"), py::arg("lambda_"), "(value, maximising rho, grid bound)");

  m.def(
      "gamma_star",
      [](double p, std::vector<int> sizes, int replicas, std::uint64_t seed, int threads) {
        const auto g = gamma_star(p, sizes, replicas, {seed, {}}, threads);
        py::dict d;
        d["value"] = g.value;
        d["stderr"] = g.stderr_;
        d["ci"] = py::make_tuple(g.ci_lo, g.ci_hi);
        return d;
      },
      py::arg("p"), py::arg("sizes") = std::vector<int>{16, 32, 48}, py::arg("replicas") = 32, py::arg("seed") = 7,
      py::arg("threads") = 1);

  m.def(
      "localization_score",
      [](double alpha, double beta, int L, int replicas, double mu_max, std::uint64_t seed, int threads) {
        const auto v = localization_score(params(alpha, beta, true), {L, replicas, mu_max, true}, {seed, {}}, threads);
        py::dict d;
        d["value"] = v.value;
        d["stderr"] = v.stderr_;
        d["mu"] = v.mu;
        d["verdict"] = verdict_name(v.verdict);
        return d;
      },
      py::arg("alpha"), py::arg("beta"), py::arg("L") = 32, py::arg("replicas") = 32, py::arg("mu_max") = 20.0,
      py::arg("seed") = 7, py::arg("threads") = 1);

  m.def(
      "run_cli",
      [](std::vector<std::string> args, std::string format) {
        std::vector<const char*> argv{"eplab"};
        for (const auto& a : args) argv.push_back(a.c_str());
        const auto c = cli::parse_args(static_cast<int>(argv.size()), argv.data()).resolved();
        return cli::render(cli::run(c), format);
      },
      py::arg("args"), py::arg("format") = "csv", "Run a command-line subcommand in-process and return its output.");
}
