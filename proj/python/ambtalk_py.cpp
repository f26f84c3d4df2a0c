#include <cmath>
#include <limits>
#include <string>
#include <tuple>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ambtalk/analysis.hpp"
#include "ambtalk/density.hpp"
#include "ambtalk/errors.hpp"
#include "ambtalk/oracle.hpp"
#include "ambtalk/partition.hpp"
#include "ambtalk/receiver.hpp"
#include "ambtalk/reproduce.hpp"

namespace py = pybind11;
using namespace ambtalk;

namespace {

// 0 is full ambiguity, inf is Bayesian, anything else is a finite penalty.
AmbiguityLevel level_of(double beta) {
  if (beta == 0.0) return AmbiguityLevel::full_ambiguity();
  if (std::isinf(beta) && beta > 0.0) return AmbiguityLevel::bayesian();
  return AmbiguityLevel::finite(beta);
}

py::dict solution_dict(const ReceiverSolution& s) {
  py::dict out;
  out["lo"] = s.interval.lo();
  out["hi"] = s.interval.hi();
  out["beta"] = s.level.beta();
  out["action"] = s.action;
  out["normalizer"] = s.normalizer;
  out["value"] = s.value;
  out["foc_residual"] = s.foc_residual;
  out["regime"] = std::string(to_string(s.regime));
  if (const auto* lottery = std::get_if<EndpointLottery>(&s.worst_case)) {
    out["worst_case"] = py::make_tuple(lottery->lo, lottery->p_lo, lottery->hi, lottery->p_hi);
  } else {
    out["worst_case"] = std::get<Density>(s.worst_case);
  }
  return out;
}

py::dict equilibrium_dict(const PartitionEquilibrium& eq) {
  py::dict out;
  out["thresholds"] = eq.thresholds;
  out["actions"] = eq.actions;
  out["bias"] = eq.bias;
  out["beta"] = eq.level.beta();
  out["indifference_residuals"] = eq.indifference_residuals();
  return out;
}

Density piecewise_linear(const std::vector<std::pair<double, double>>& knots) {
  std::vector<Knot> k;
  for (const auto& [theta, value] : knots) k.push_back({theta, value});
  if (k.empty()) throw InvalidArgument("piecewise_linear needs knots");
  return make_piecewise_linear(k, Interval(k.front().theta, k.back().theta));
}

}  // namespace

PYBIND11_MODULE(ambtalk, m) {
  m.doc() = "Robust receiver actions and partition equilibria under KL-penalized ambiguity";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  static py::exception<NumericalError> numerical(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const NumericalError& e) {
      PyErr_SetString(numerical.ptr(), e.what());
    }
  });

  py::class_<Density>(m, "Density")
      .def("__call__", &Density::operator(), py::arg("theta"))
      .def("log_value", &Density::log_value, py::arg("theta"))
      .def_property_readonly("support", [](const Density& d) { return std::make_pair(d.support().lo(), d.support().hi()); })
      .def_property_readonly("kind", [](const Density& d) { return std::string(to_string(d.kind())); })
      .def_property_readonly("description", &Density::description)
      .def("mean", [](const Density& d) { return mean(d); })
      .def("variance", [](const Density& d) { return variance(d); })
      .def("restrict", [](const Density& d, double lo, double hi) { return restrict(d, Interval(lo, hi)); },
           py::arg("lo"), py::arg("hi"))
      .def("mirror", [](const Density& d) { return mirror(d); })
      .def("__repr__", [](const Density& d) { return "<Density " + d.description() + ">"; });

  m.def("uniform", [](double lo, double hi) { return make_uniform(Interval(lo, hi)); }, py::arg("lo") = 0.0,
        py::arg("hi") = 1.0);
  m.def("piecewise_linear", &piecewise_linear, py::arg("knots"),
        "Linear interpolation through (theta, value) knots; the support spans the first to the last knot.");
  m.def("truncated_normal",
        [](double h, double sigma, double lo, double hi) { return make_truncated_normal(h, sigma, Interval(lo, hi)); },
        py::arg("h"), py::arg("sigma"), py::arg("lo") = 0.0, py::arg("hi") = 1.0);
  m.def("counterexample", &make_counterexample, py::arg("epsilon"));
  m.def("kl_divergence", [](const Density& f, const Density& g) { return kl_divergence(f, g); });

  m.def(
      "solve_action",
      [](const Density& g, double beta, std::optional<double> lo, std::optional<double> hi) {
        const Interval iv(lo.value_or(g.support().lo()), hi.value_or(g.support().hi()));
        const Density g_m = iv == g.support() ? g : restrict(g, iv);
        return solution_dict(solve_action(g_m, iv, level_of(beta)));
      },
      py::arg("g"), py::arg("beta"), py::arg("lo") = py::none(), py::arg("hi") = py::none(),
      "Optimal action on [lo, hi] (default: the support). beta = 0 or inf select the limiting regimes.");
  m.def(
      "action_sweep",
      [](const Density& g, const std::vector<double>& betas) {
        std::vector<py::dict> out;
        for (const SweepPoint& p : action_sweep(g, g.support(), betas)) out.push_back(solution_dict(p.solution));
        return out;
      },
      py::arg("g"), py::arg("betas"));
  m.def(
      "worst_case_density",
      [](const Density& g, double a, double beta) {
        auto t = worst_case_density(g, a, beta);
        return py::make_tuple(t.density, t.normalizer);
      },
      py::arg("g"), py::arg("a"), py::arg("beta"));
  m.def("dual_objective", [](const Density& g, double a, double beta) { return dual_objective(g, a, beta); },
        py::arg("g"), py::arg("a"), py::arg("beta"));
  m.def("foc_residual", [](const Density& g, double a, double beta) { return foc_residual(g, a, beta); },
        py::arg("g"), py::arg("a"), py::arg("beta"));

  m.def(
      "solve_partition",
      [](const Density& g, double d, int n, double beta) -> std::optional<py::dict> {
        const auto eq = solve_partition(g, d, n, level_of(beta));
        if (!eq) return std::nullopt;
        return equilibrium_dict(*eq);
      },
      py::arg("g"), py::arg("d"), py::arg("n"), py::arg("beta"), "None when no n-interval equilibrium exists.");
  m.def("max_intervals", [](const Density& g, double d, double beta) { return max_intervals(g, d, level_of(beta)); },
        py::arg("g"), py::arg("d"), py::arg("beta"));
  m.def(
      "babbling_threshold",
      [](const Density& g, double beta, double tol) { return babbling_threshold(g, level_of(beta), tol); },
      py::arg("g"), py::arg("beta"), py::arg("tol") = 1e-6);

  m.def(
      "compare_regimes",
      [](const Density& g, const Density& prior, double d, double beta, std::optional<int> n) {
        const WelfareReport r = compare_regimes(g, prior, d, level_of(beta), n);
        py::dict out;
        out["u_bayes"] = r.u_bayes;
        out["u_amb"] = r.u_amb;
        out["verdict"] = std::string(to_string(r.verdict));
        out["shifts"] = r.per_interval_action_shift;
        out["bayes"] = equilibrium_dict(r.bayes_equilibrium);
        out["amb"] = equilibrium_dict(r.amb_equilibrium);
        return out;
      },
      py::arg("g"), py::arg("prior"), py::arg("d"), py::arg("beta"), py::arg("n") = py::none());
  m.def(
      "mirror_pairing",
      [](const Density& g, double d, double beta, double tol) {
        const MirrorPairing p = mirror_pairing(g, g, d, beta, tol);
        return py::make_tuple(p.holds, p.max_error);
      },
      py::arg("g"), py::arg("d"), py::arg("beta"), py::arg("tol") = 1e-6);
  m.def(
      "example1_signs",
      [](double h, double sigma, double beta) {
        const Example1Result r = example1_signs(h, sigma, beta, Interval(0.0, 1.0));
        py::dict out;
        out["action"] = r.action;
        out["bayes_action"] = r.bayes_action;
        out["sign"] = r.sign;
        out["predicted_sign"] = r.predicted_sign;
        return out;
      },
      py::arg("h"), py::arg("sigma"), py::arg("beta"));
  m.def(
      "solve_ex_ante",
      [](const Density& g, const std::vector<double>& thresholds, double d, double beta) {
        const PartitionEquilibrium eq = partition_from_thresholds(g, thresholds, d, level_of(beta));
        const ExAnteSolution s = solve_ex_ante(g, eq, beta);
        py::dict out;
        out["c_star"] = s.c_star;
        out["p_hat"] = s.p_hat;
        out["worst_interval"] = s.worst_interval;
        out["value"] = s.value;
        out["conditional_actions"] = s.conditional_actions;
        std::vector<double> posterior;
        for (const auto& p : s.posterior) posterior.push_back(p.action);
        out["posterior_actions"] = posterior;
        out["tie"] = s.tie;
        return out;
      },
      py::arg("g"), py::arg("thresholds"), py::arg("d"), py::arg("beta"));

  m.def(
      "reproduce",
      [](const std::string& which) {
        const ScenarioReport r = reproduce(which);
        std::vector<std::tuple<std::string, bool, std::string>> claims;
        for (const Claim& c : r.claims) claims.emplace_back(c.name, c.pass, c.detail);
        return claims;
      },
      py::arg("which"), "List of (claim, passed, detail).");
  m.def("scenarios", [] {
    std::vector<std::string> out;
    for (auto s : reproduce_scenarios()) out.emplace_back(s);
    return out;
  });

  py::module_ oracle = m.def_submodule("oracle", "Brute-force reference implementations");
  oracle.def(
      "grid_action",
      [](const Density& g, double beta, int n_points) {
        return oracle::grid_action(g, g.support(), beta, oracle::GridSpec{n_points});
      },
      py::arg("g"), py::arg("beta"), py::arg("n_points") = 100001);
  oracle.def(
      "discrete_inner_min",
      [](const std::vector<double>& g, const std::vector<double>& theta, double a, double beta, int n_points) {
        const auto r = oracle::discrete_inner_min(g, theta, a, beta, oracle::GridSpec{n_points});
        py::dict out;
        out["f_grid"] = r.f_grid;
        out["f_tilt"] = r.f_tilt;
        out["value_grid"] = r.value_grid;
        out["value_tilt"] = r.value_tilt;
        out["max_abs_diff"] = r.max_abs_diff;
        out["resolution"] = r.resolution;
        return out;
      },
      py::arg("g"), py::arg("theta"), py::arg("a"), py::arg("beta"), py::arg("n_points") = 41);
  oracle.def("cs_uniform_thresholds", &oracle::cs_uniform_thresholds, py::arg("d"), py::arg("n"));
}
