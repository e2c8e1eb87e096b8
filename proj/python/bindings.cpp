#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sgi/analytic.hpp"
#include "sgi/core.hpp"
#include "sgi/fock.hpp"
#include "sgi/montecarlo.hpp"
#include "sgi/noise.hpp"
#include "sgi/qfho.hpp"

namespace py = pybind11;
using namespace sgi;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stern-Gerlach interferometer spin-contrast simulation core";

  py::register_exception<config_error>(m, "ConfigError", PyExc_ValueError);

  py::class_<PhysicalParams>(m, "PhysicalParams")
      .def(py::init<>())
      .def_readwrite("mass", &PhysicalParams::mass)
      .def_readwrite("mass_susceptibility", &PhysicalParams::mass_susceptibility)
      .def_readwrite("magnetic_moment", &PhysicalParams::magnetic_moment)
      .def_readwrite("bias_field", &PhysicalParams::bias_field)
      .def_readwrite("gradient", &PhysicalParams::gradient)
      .def("validate", &PhysicalParams::validate)
      .def("moment", &PhysicalParams::moment);

  py::class_<TrapParams>(m, "TrapParams")
      .def_readonly("omega", &TrapParams::omega)
      .def_readonly("lambda_", &TrapParams::lambda)
      .def_readonly("u", &TrapParams::u)
      .def_readonly("wavepacket_width", &TrapParams::wavepacket_width)
      .def_readonly("superposition_size", &TrapParams::superposition_size)
      .def_readonly("equilibrium", &TrapParams::equilibrium);

  py::class_<ThermalState>(m, "ThermalState")
      .def_readonly("occupation", &ThermalState::occupation)
      .def_readonly("temperature", &ThermalState::temperature);

  py::class_<TimeGrid>(m, "TimeGrid")
      .def(py::init<std::size_t, double>(), py::arg("steps"), py::arg("omega"))
      .def_property_readonly("steps", &TimeGrid::steps)
      .def_property_readonly("nodes", &TimeGrid::nodes)
      .def_property_readonly("omega", &TimeGrid::omega)
      .def_property_readonly("period", &TimeGrid::period)
      .def_property_readonly("dt", &TimeGrid::dt)
      .def("node", &TimeGrid::node);

  m.def("derive_trap", &derive_trap);
  m.def("thermal_occupation", &thermal_occupation, py::arg("temperature"),
        py::arg("omega"));
  m.def("thermal_from_occupation", &thermal_from_occupation, py::arg("n"),
        py::arg("omega"));

  py::class_<PsdModel>(m, "PsdModel")
      .def_static("white", &PsdModel::white, py::arg("sigma2"), py::arg("omega"))
      .def_static("lorentzian", &PsdModel::lorentzian, py::arg("sigma2"),
                  py::arg("gamma"), py::arg("omega0"), py::arg("omega"))
      .def_static("tabulated", &PsdModel::tabulated, py::arg("table"),
                  py::arg("omega"))
      .def_readonly("omega", &PsdModel::omega)
      .def_readonly("sigma2", &PsdModel::sigma2)
      .def_readonly("gamma", &PsdModel::gamma)
      .def_readonly("omega0", &PsdModel::omega0)
      .def("validate", &PsdModel::validate);

  py::class_<NoiseSeries>(m, "NoiseSeries")
      .def_readonly("values", &NoiseSeries::values)
      .def_readonly("seed", &NoiseSeries::seed)
      .def_readonly("stream", &NoiseSeries::stream);

  m.def("psd_eval", &psd_eval, py::arg("model"), py::arg("Omega"));
  m.def(
      "autocorr",
      [](const PsdModel& model, double tau) {
        const AutocorrValue v = autocorr(model, tau);
        return py::make_tuple(v.value, v.delta_weight);
      },
      py::arg("model"), py::arg("tau"),
      "(value, is_delta_weight); white noise reports the delta weight");
  m.def("synthesize", &synthesize, py::arg("model"), py::arg("grid"), py::arg("seed"),
        py::arg("stream") = 0);

  py::enum_<NoiseMode>(m, "NoiseMode")
      .value("SpinIndependent", NoiseMode::SpinIndependent)
      .value("SpinDependent", NoiseMode::SpinDependent);

  py::enum_<Branch>(m, "Branch")
      .value("Left", Branch::Left)
      .value("Right", Branch::Right);

  py::class_<DriveSpec>(m, "DriveSpec")
      .def(py::init<>())
      .def_readwrite("u", &DriveSpec::u)
      .def_readwrite("noise", &DriveSpec::noise)
      .def_readwrite("mode", &DriveSpec::mode);

  py::class_<BranchSolution>(m, "BranchSolution")
      .def_readonly("zeta", &BranchSolution::zeta)
      .def_readonly("phi", &BranchSolution::phi)
      .def("zeta_final", &BranchSolution::zeta_final)
      .def("phi_final", &BranchSolution::phi_final);

  py::class_<OverlapResult>(m, "OverlapResult")
      .def_readonly("delta_zeta", &OverlapResult::delta_zeta)
      .def_readonly("delta_phi", &OverlapResult::delta_phi)
      .def_readonly("bch_phase", &OverlapResult::bch_phase)
      .def_readonly("overlap_at_alpha", &OverlapResult::overlap_at_alpha)
      .def_readonly("beta_thermal", &OverlapResult::beta_thermal);

  m.def("solve_branch", &solve_branch, py::arg("drive"), py::arg("branch"),
        py::arg("grid"));
  m.def("solve_branch_stepwise", &solve_branch_stepwise, py::arg("drive"),
        py::arg("branch"), py::arg("grid"));
  m.def("overlap", &overlap, py::arg("left"), py::arg("right"), py::arg("alpha"));
  m.def("thermal_beta", &thermal_beta, py::arg("left"), py::arg("right"),
        py::arg("n"));

  py::enum_<PsdConvention>(m, "PsdConvention")
      .value("Paper", PsdConvention::Paper)
      .value("Wk2pi", PsdConvention::Wk2pi);

  py::class_<TransferKind>(m, "TransferKind")
      .def_static("dephase", &TransferKind::dephase, py::arg("u"))
      .def_static("mismatch_re", &TransferKind::mismatch_re)
      .def_static("mismatch_im", &TransferKind::mismatch_im);

  py::class_<ContrastResult>(m, "ContrastResult")
      .def_readonly("gamma", &ContrastResult::gamma)
      .def_readonly("var_re", &ContrastResult::var_re)
      .def_readonly("var_im", &ContrastResult::var_im)
      .def_readonly("beta", &ContrastResult::beta)
      .def_readonly("contrast", &ContrastResult::contrast)
      .def_readonly("error_estimate", &ContrastResult::error_estimate)
      .def_readonly("convention", &ContrastResult::convention);

  m.def("transfer_eval", &transfer_eval, py::arg("kind"), py::arg("x"));
  m.def("gamma_spin_independent", &gamma_spin_independent, py::arg("psd"),
        py::arg("u"), py::arg("convention") = PsdConvention::Paper);
  m.def("mismatch_variances", &mismatch_variances, py::arg("psd"));
  m.def("contrast_spin_dependent", &contrast_spin_dependent, py::arg("psd"),
        py::arg("n"));
  m.def(
      "tolerance_solve",
      [](NoiseMode mode, const std::function<PsdModel(double)>& family, double u,
         double n, double target) {
        ToleranceProblem p;
        p.mode = mode;
        p.family = family;
        p.u = u;
        p.n = n;
        return tolerance_solve(p, target);
      },
      py::arg("mode"), py::arg("family"), py::arg("u"), py::arg("n"),
      py::arg("target"));

  py::class_<McConfig>(m, "McConfig")
      .def(py::init<>())
      .def_readwrite("runs", &McConfig::runs)
      .def_readwrite("grid_n", &McConfig::grid_n)
      .def_readwrite("master_seed", &McConfig::master_seed)
      .def_readwrite("mode", &McConfig::mode)
      .def_readwrite("psd", &McConfig::psd)
      .def_readwrite("u", &McConfig::u)
      .def_readwrite("occupation", &McConfig::occupation);

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("value", &Estimate::value)
      .def_readonly("std_error", &Estimate::std_error);

  py::class_<McSummary>(m, "McSummary")
      .def_readonly("mean_beta", &McSummary::mean_beta)
      .def_readonly("mean_beta_se_re", &McSummary::mean_beta_se_re)
      .def_readonly("mean_beta_se_im", &McSummary::mean_beta_se_im)
      .def_readonly("contrast", &McSummary::contrast)
      .def_readonly("dphi_variance", &McSummary::dphi_variance)
      .def_readonly("gamma_hat", &McSummary::gamma_hat)
      .def_readonly("mean_re2_dzeta", &McSummary::mean_re2_dzeta)
      .def_readonly("mean_im2_dzeta", &McSummary::mean_im2_dzeta)
      .def_readonly("max_abs_dzeta", &McSummary::max_abs_dzeta)
      .def_readonly("max_abs_dphi", &McSummary::max_abs_dphi);

  py::class_<CompareReport>(m, "CompareReport")
      .def_readonly("z_gamma", &CompareReport::z_gamma)
      .def_readonly("z_var_re", &CompareReport::z_var_re)
      .def_readonly("z_var_im", &CompareReport::z_var_im)
      .def_readonly("z_contrast", &CompareReport::z_contrast)
      .def_readonly("pass_", &CompareReport::pass)
      .def_readonly("detail", &CompareReport::detail);

  m.def(
      "run_ensemble", [](const McConfig& cfg) { return run_ensemble(cfg); },
      py::arg("cfg"), py::call_guard<py::gil_scoped_release>());
  m.def("compare_analytic", &compare_analytic, py::arg("mc"), py::arg("analytic"),
        py::arg("mode"));
  m.def(
      "thermal_independence_check",
      [](const McConfig& cfg, double n1) {
        const IndependenceReport r = thermal_independence_check(cfg, n1);
        return py::make_tuple(r.max_delta, r.pass);
      },
      py::arg("cfg"), py::arg("n1"), "(max_delta, pass)");
  m.def("mc_summary_to_json", &mc_summary_to_json, py::arg("summary"));

  py::class_<FockState>(m, "FockState")
      .def_readonly("amp", &FockState::amp)
      .def_property_readonly("dim", &FockState::dim)
      .def("norm", &FockState::norm);

  py::class_<PropagatorConfig>(m, "PropagatorConfig")
      .def(py::init<>())
      .def_readwrite("dim", &PropagatorConfig::dim)
      .def_readwrite("substeps", &PropagatorConfig::substeps);

  m.def("coherent_state", &coherent_state, py::arg("alpha"), py::arg("dim"));
  m.def("propagate", &propagate, py::arg("initial"), py::arg("drive"),
        py::arg("branch"), py::arg("grid"), py::arg("cfg"),
        py::call_guard<py::gil_scoped_release>());
  m.def("overlap_numeric", &overlap_numeric, py::arg("bra"), py::arg("ket"));
}
