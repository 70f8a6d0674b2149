#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "savns/errors.hpp"
#include "savns/verification.hpp"

namespace py = pybind11;
using namespace savns;

namespace {

py::array_t<double> to_numpy(const ScalarField& f) {
  const Grid& g = f.grid();
  py::array_t<double> a({g.ny(), g.nx()});
  std::copy(f.values().begin(), f.values().end(), a.mutable_data());
  return a;
}

py::array_t<double> to_numpy(const VectorField& f) {
  const Grid& g = f.grid();
  py::array_t<double> a({2, g.ny(), g.nx()});
  std::copy(f.values().begin(), f.values().end(), a.mutable_data());
  return a;
}

py::dict state_dict(const FlowState& s) {
  py::dict d;
  d["u"] = to_numpy(s.u);
  d["p"] = to_numpy(s.p);
  d["q"] = s.q;
  d["t"] = s.t;
  d["step"] = s.step;
  return d;
}

py::dict row_dict(const ConvergenceRow& r) {
  py::dict d;
  d["param"] = r.param;
  d["err_u_linf"] = r.err_u_linf;
  d["err_p_l2"] = r.err_p_l2;
  d["div_linf"] = r.div_linf;
  d["q_drift"] = r.q_drift;
  d["order_u"] = r.order_u;
  d["order_p"] = r.order_p;
  d["seconds"] = r.seconds;
  d["error"] = r.error;
  return d;
}

// Velocity samples shaped (2, ny, nx) on the grid of spec.
void set_initial(RunSpec& spec, py::array_t<double, py::array::c_style | py::array::forcecast> u) {
  const Grid g = make_case(spec.case_id, spec.nu).grid(spec.n, spec.discretization);
  if (u.ndim() != 3 || u.shape(0) != 2 || u.shape(1) != g.ny() || u.shape(2) != g.nx())
    throw ConfigError("initial_velocity: expected shape (2, n, n)");
  std::vector<double> data(u.data(), u.data() + u.size());
  spec.initial_velocity = std::make_shared<const VectorField>(g, std::move(data));
}

}  // namespace

PYBIND11_MODULE(_savns, m) {
  m.doc() = "Penalty and SR scalar-auxiliary-variable Navier-Stokes solvers";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<DegenerateQError>(m, "DegenerateQError", PyExc_RuntimeError);

  py::enum_<SchemeKind>(m, "SchemeKind")
      .value("psav1", SchemeKind::Psav1)
      .value("psav2", SchemeKind::Psav2)
      .value("srsav1", SchemeKind::Srsav1)
      .value("srsav2", SchemeKind::Srsav2)
      .value("projection", SchemeKind::Projection);

  py::enum_<CaseId>(m, "CaseId")
      .value("example1", CaseId::Example1)
      .value("example2", CaseId::Example2);

  py::class_<RunSpec>(m, "RunSpec")
      .def(py::init([](CaseId c, SchemeKind s, int n, double dt, py::kwargs kw) {
             RunSpec spec;
             spec.case_id = c;
             spec.scheme = s;
             spec.n = n;
             spec.dt = dt;
             py::object self = py::cast(spec);
             for (auto item : kw) py::setattr(self, item.first, item.second);
             return self.cast<RunSpec>();
           }),
           py::arg("case") = CaseId::Example2, py::arg("scheme") = SchemeKind::Psav1,
           py::arg("n") = 32, py::arg("dt") = 1.0 / 32)
      .def_readwrite("case", &RunSpec::case_id)
      .def_readwrite("scheme", &RunSpec::scheme)
      .def_readwrite("n", &RunSpec::n)
      .def_property(
          "backend",
          [](const RunSpec& s) {
            return s.discretization == Discretization::Spectral ? "spectral" : "fd";
          },
          [](RunSpec& s, const std::string& b) {
            if (b != "spectral" && b != "fd") throw ConfigError("backend: spectral or fd");
            s.discretization =
                b == "fd" ? Discretization::FiniteDifference : Discretization::Spectral;
          })
      .def_readwrite("fd_order", &RunSpec::fd_order)
      .def_readwrite("dt", &RunSpec::dt)
      .def_readwrite("T", &RunSpec::T)
      .def_readwrite("nu", &RunSpec::nu)
      .def_readwrite("eps", &RunSpec::eps)
      .def_readwrite("beta", &RunSpec::beta)
      .def_readwrite("s", &RunSpec::s)
      .def_readwrite("warm_start", &RunSpec::warm_start)
      .def_readwrite("forcing", &RunSpec::forcing)
      .def_readwrite("tol", &RunSpec::solver_tol)
      .def("set_initial_velocity", &set_initial, py::arg("u"),
           "Replace the case data by a (2, n, n) velocity array on the case grid.")
      .def("steps", &RunSpec::steps)
      .def("validate", &RunSpec::validate);

  m.def(
      "run",
      [](const RunSpec& spec) {
        RunResult r;
        {
          py::gil_scoped_release nogil;
          r = run(spec);
        }
        py::dict d = state_dict(r.final_state);
        d["err_u_linf"] = r.err_u_linf;
        d["err_p_l2"] = r.err_p_l2;
        d["div_linf"] = r.div_linf;
        d["q_drift"] = r.q_drift;
        d["seconds"] = r.seconds;
        return d;
      },
      py::arg("spec"), "Integrate to spec.T; returns the final state and its errors.");

  py::class_<ConvergenceReport>(m, "ConvergenceReport")
      .def_readonly("scheme", &ConvergenceReport::scheme)
      .def_readonly("backend", &ConvergenceReport::backend)
      .def_readonly("parameter", &ConvergenceReport::parameter)
      .def_property_readonly("rows",
                             [](const ConvergenceReport& r) {
                               py::list out;
                               for (const auto& row : r.rows) out.append(row_dict(row));
                               return out;
                             })
      .def("fitted_order_u", &ConvergenceReport::fitted_order_u)
      .def("fitted_order_p", &ConvergenceReport::fitted_order_p)
      .def("fitted_order_div", &ConvergenceReport::fitted_order_div)
      .def("to_csv", [](const ConvergenceReport& r) {
        std::ostringstream s;
        r.write_csv(s);
        return s.str();
      });

  m.def(
      "run_convergence",
      [](const RunSpec& spec, const std::vector<double>& dts, int jobs) {
        py::gil_scoped_release nogil;
        return run_convergence(spec, dts, jobs);
      },
      py::arg("spec"), py::arg("dts"), py::arg("jobs") = 1);

  m.def(
      "run_eps_sweep",
      [](const RunSpec& spec, const std::vector<SchemeKind>& schemes,
         const std::vector<double>& eps, int jobs) {
        py::gil_scoped_release nogil;
        return run_eps_sweep(spec, schemes, eps, jobs);
      },
      py::arg("spec"), py::arg("schemes"), py::arg("eps"), py::arg("jobs") = 1);

  m.def(
      "energy_series",
      [](const RunSpec& spec) {
        std::vector<EnergySample> e;
        {
          py::gil_scoped_release nogil;
          e = energy_series(spec);
        }
        py::array_t<double> a({static_cast<py::ssize_t>(e.size()), py::ssize_t{3}});
        auto v = a.mutable_unchecked<2>();
        for (std::size_t k = 0; k < e.size(); ++k) {
          v(k, 0) = e[k].t;
          v(k, 1) = e[k].original;
          v(k, 2) = e[k].modified;
        }
        return a;
      },
      py::arg("spec"), "Free decay; rows of (t, original energy, modified energy).");

  m.def(
      "max_energy_gap",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> a) {
        if (a.ndim() != 2 || a.shape(1) != 3) throw ConfigError("expected an (N, 3) array");
        std::vector<EnergySample> e(a.shape(0));
        auto v = a.unchecked<2>();
        for (py::ssize_t k = 0; k < a.shape(0); ++k) e[k] = {v(k, 0), v(k, 1), v(k, 2)};
        return max_energy_gap(e);
      },
      py::arg("series"));

  m.def("parse_number", [](const std::string& s) { return parse_number(s); });
}
