#include "floqsim/config.hpp"
#include "floqsim/digital.hpp"
#include "floqsim/error.hpp"
#include "floqsim/experiments.hpp"
#include "floqsim/floquet.hpp"
#include "floqsim/special.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace floqsim;

namespace {

Eigen::Matrix3d to_array(const XiMatrix& xi) {
  Eigen::Matrix3d m;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) m(a, b) = xi.entries[a][b];
  }
  return m;
}

DriveConfig drive(double omega, const std::array<double, 3>& even, const std::array<double, 3>& odd) {
  DriveConfig c;
  c.omega = omega;
  c.even = {even[0], even[1], even[2]};
  c.odd = {odd[0], odd[1], odd[2]};
  c.validate();
  return c;
}

ExperimentConfig make_config(const std::string& scenario,
                             const std::map<std::string, std::string>& overrides) {
  ExperimentConfig cfg = ExperimentConfig::defaults(scenario);
  for (const auto& [k, v] : overrides) cfg.set(k, v);
  return cfg;
}

py::dict certificate_dict(const RunSummary& r) {
  py::dict d;
  if (!r.certificate) return d;
  d["substeps"] = r.certificate->substeps;
  d["refined_substeps"] = r.certificate->refined_substeps;
  d["delta"] = r.certificate->delta;
  d["tolerance"] = r.certificate->tolerance;
  d["passed"] = r.certificate->passed;
  return d;
}

}  // namespace

PYBIND11_MODULE(_floqsim, m) {
  m.doc() = "Driven spin chains: Floquet, continuous and digital annealing.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("bessel_j0", &bessel_j0, py::arg("x"));
  m.def("calibrate_ising_chi", &calibrate_ising_chi);
  m.def("calibrate_xyz_chi", &calibrate_xyz_chi);

  m.def(
      "xi_instantaneous",
      [](double omega, std::array<double, 3> even, std::array<double, 3> odd, double t) {
        return to_array(xi_instantaneous(drive(omega, even, odd), t));
      },
      py::arg("omega"), py::arg("even"), py::arg("odd"), py::arg("t"),
      "3x3 bond coefficients at time t. `even` and `odd` are (theta, phi, chi).");
  m.def(
      "xi_averaged",
      [](double omega, std::array<double, 3> even, std::array<double, 3> odd) {
        return to_array(xi_averaged(drive(omega, even, odd)));
      },
      py::arg("omega"), py::arg("even"), py::arg("odd"));

  py::class_<RunSummary>(m, "RunSummary")
      .def_readonly("times", &RunSummary::times)
      .def_readonly("fidelity", &RunSummary::fidelity_series)
      .def_readonly("magnetization", &RunSummary::magnetization)
      .def_readonly("final_fidelity", &RunSummary::final_fidelity)
      .def_readonly("metadata", &RunSummary::metadata)
      .def_property_readonly("certificate", &certificate_dict)
      .def_property_readonly("infidelity", [](const RunSummary& r) { return 1.0 - r.final_fidelity; });

  py::class_<IsingAnnealSetup>(m, "IsingAnnealSetup")
      .def(py::init<>())
      .def_readwrite("n_sites", &IsingAnnealSetup::n_sites)
      .def_readwrite("J", &IsingAnnealSetup::J)
      .def_readwrite("hz", &IsingAnnealSetup::hz)
      .def_readwrite("t_final", &IsingAnnealSetup::t_final)
      .def_readwrite("omega", &IsingAnnealSetup::omega)
      .def_readwrite("chi", &IsingAnnealSetup::chi)
      .def_readwrite("ramp_coupling", &IsingAnnealSetup::ramp_coupling)
      .def_readwrite("substeps", &IsingAnnealSetup::substeps)
      .def_readwrite("tolerance", &IsingAnnealSetup::tolerance)
      .def_readwrite("max_refinements", &IsingAnnealSetup::max_refinements);

  m.def("floquet_ising_anneal", &floquet_ising_anneal, py::arg("setup"),
        py::call_guard<py::gil_scoped_release>());
  m.def("transmon_ising_anneal", &transmon_ising_anneal, py::arg("setup"),
        py::arg("anharmonicity"), py::call_guard<py::gil_scoped_release>());
  m.def("continuous_ising_anneal", &continuous_ising_anneal, py::arg("setup"),
        py::arg("steps") = 4000, py::call_guard<py::gil_scoped_release>());

  m.def(
      "digital_ising_anneal",
      [](int n_sites, int n_trotter, double t_final, double hz, double J, bool endpoint) {
        DigitalOptions o;
        o.sampling = endpoint ? ScheduleSampling::endpoint : ScheduleSampling::midpoint;
        return digital_anneal(ChainSpec(n_sites, 2), TrotterPlan::ising(n_trotter, t_final),
                              AnnealSchedule{t_final, true}, hz, J, o);
      },
      py::arg("n_sites"), py::arg("n_trotter"), py::arg("t_final"), py::arg("hz") = 1.0,
      py::arg("J") = -1.0, py::arg("endpoint") = false);

  m.def("gates_per_step", &ErrorModel::gates_per_step, py::arg("n_sites"));
  m.def("trotter_step_time", &ErrorModel::trotter_step_time, py::arg("n_sites"),
        py::arg("t_gate"));
  m.def(
      "total_fidelity",
      [](double eps, int n_sites, int n_steps, double eps_dig) {
        ErrorModel em;
        em.eps = eps;
        em.validate();
        return total_fidelity(em, n_sites, n_steps, eps_dig);
      },
      py::arg("eps"), py::arg("n_sites"), py::arg("n_steps"), py::arg("eps_dig"));

  m.def("scenario_names", &scenario_names);
  m.def(
      "config_keys",
      []() {
        std::map<std::string, std::string> out;
        for (const ConfigKey& k : config_schema()) out[k.name] = k.doc;
        return out;
      },
      "Schema keys and their descriptions.");
  m.def(
      "default_config",
      [](const std::string& scenario) { return ExperimentConfig::defaults(scenario).values(); },
      py::arg("scenario"));
  m.def(
      "run_scenario_json",
      [](const std::string& scenario, const std::map<std::string, std::string>& overrides,
         int workers, std::optional<std::filesystem::path> out) {
        const ExperimentConfig cfg = make_config(scenario, overrides);
        ResultRecord r;
        {
          py::gil_scoped_release release;
          r = run_scenario(cfg, workers);
          if (out) write_outputs(r, *out, workers);
        }
        return summary_json(r).dump();
      },
      py::arg("scenario"), py::arg("overrides") = std::map<std::string, std::string>{},
      py::arg("workers") = 1, py::arg("out") = py::none(),
      "Runs a scenario and returns its summary as JSON text; writes the CSVs when `out` is set.");
}
