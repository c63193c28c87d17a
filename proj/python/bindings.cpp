#include <algorithm>
#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "qpsmc/config.hpp"
#include "qpsmc/errors.hpp"
#include "qpsmc/meanfield.hpp"
#include "qpsmc/oracle.hpp"
#include "qpsmc/quadrature.hpp"
#include "qpsmc/sampler.hpp"
#include "qpsmc/scan.hpp"
#include "qpsmc/symmetrization.hpp"

namespace py = pybind11;
using namespace qpsmc;

namespace {

AlgorithmOptions make_options(int n_particles, int sym_order, const std::string& statistics, bool commutation,
                              const std::string& quadrature, int hermite_order, std::optional<double> u_cut,
                              const std::string& cut_criterion, bool newton_safeguard,
                              std::optional<double> lj_rcut, const std::string& dimer_rule) {
  AlgorithmOptions o;
  o.n_particles = n_particles;
  o.sym_order = sym_order;
  o.statistics = statistics_from_string(statistics);
  o.commutation = commutation;
  o.quadrature = quadrature_from_string(quadrature);
  o.hermite_order = hermite_order;
  o.u_cut = u_cut;
  o.cut_criterion = cut_criterion_from_string(cut_criterion);
  o.newton_safeguard = newton_safeguard;
  o.lj_rcut = lj_rcut;
  o.dimer_rule = dimer_rule_from_string(dimer_rule);
  return o;
}

} // namespace

PYBIND11_MODULE(_qpsmc, m) {
  m.doc() = "Semiclassical Monte Carlo for trapped Lennard-Jones particles in one dimension";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<SingularConfiguration>(m, "SingularConfiguration", PyExc_ValueError);
  py::register_exception<RefinementError>(m, "RefinementError", PyExc_RuntimeError);

  py::class_<ModelParams>(m, "ModelParams")
      .def_readonly("n_particles", &ModelParams::n_particles)
      .def_readonly("de_boer", &ModelParams::de_boer)
      .def_readonly("trap_ratio", &ModelParams::trap_ratio)
      .def_readonly("beta_lj", &ModelParams::beta_lj)
      .def_readonly("sym_order", &ModelParams::sym_order)
      .def_readonly("u_cut", &ModelParams::u_cut)
      .def_readonly("epsilon", &ModelParams::epsilon)
      .def_readonly("omega", &ModelParams::omega)
      .def_readonly("omega_lj", &ModelParams::omega_lj)
      .def_readonly("beta", &ModelParams::beta)
      .def_readonly("lambda_th", &ModelParams::lambda_th)
      .def_property_readonly("statistics", [](const ModelParams& p) { return to_string(p.statistics); })
      .def("epsilon_over_hbar_omega", &ModelParams::epsilon_over_hbar_omega)
      .def("omega_lj_over_omega", &ModelParams::omega_lj_over_omega);

  m.def(
      "build_params",
      [](double de_boer, double trap_ratio, double beta_lj, int n_particles, int sym_order,
         const std::string& statistics, bool commutation, const std::string& quadrature, int hermite_order,
         std::optional<double> u_cut, const std::string& cut_criterion, bool newton_safeguard,
         std::optional<double> lj_rcut, const std::string& dimer_rule) {
        return build_params(de_boer, trap_ratio, beta_lj,
                            make_options(n_particles, sym_order, statistics, commutation, quadrature,
                                         hermite_order, u_cut, cut_criterion, newton_safeguard, lj_rcut,
                                         dimer_rule));
      },
      py::arg("de_boer"), py::arg("trap_ratio"), py::arg("beta_lj"), py::kw_only(), py::arg("n_particles") = 1,
      py::arg("sym_order") = 1, py::arg("statistics") = "boson", py::arg("commutation") = true,
      py::arg("quadrature") = "monomial", py::arg("hermite_order") = 6, py::arg("u_cut") = py::none(),
      py::arg("cut_criterion") = "energy", py::arg("newton_safeguard") = false, py::arg("lj_rcut") = py::none(),
      py::arg("dimer_rule") = "coupled");
  m.def("beta_lj_from_trap_units", &beta_lj_from_trap_units, py::arg("beta_hbar_omega"), py::arg("trap_ratio"));

  py::class_<Configuration>(m, "Configuration")
      .def(py::init<std::vector<double>>(), py::arg("positions"))
      .def("__len__", &Configuration::size)
      .def("__getitem__", [](const Configuration& q, std::size_t j) {
        if (j >= q.size()) throw py::index_error();
        return q[j];
      })
      .def_property_readonly("positions", [](const Configuration& q) {
        return std::vector<double>(q.positions().begin(), q.positions().end());
      });

  m.def("potential_total", &potential_total, py::arg("q"), py::arg("params"));
  m.def("potential_minimum", &potential_minimum, py::arg("params"));
  m.def("lj_pair", &lj_pair, py::arg("r"), py::arg("epsilon"));

  py::class_<LocalMode>(m, "LocalMode")
      .def_readonly("active", &LocalMode::active)
      .def_readonly("q_bar", &LocalMode::q_bar)
      .def_readonly("u_bar", &LocalMode::u_bar)
      .def_readonly("omega", &LocalMode::omega)
      .def_readonly("displacement", &LocalMode::displacement)
      .def_readonly("excess", &LocalMode::excess);
  m.def("locate_minima", &locate_minima, py::arg("q"), py::arg("params"));

  m.def("hermite", &hermite, py::arg("n"), py::arg("z"));
  m.def("w_sho_series", &w_sho_series, py::arg("P"), py::arg("Q"), py::arg("beta_hbar_omega"), py::arg("n_max"));
  m.def("w_sho_closed_form", &w_sho_closed_form, py::arg("P"), py::arg("Q"), py::arg("beta_hbar_omega"));
  m.def("gaussian_moment", &gaussian_moment, py::arg("alpha"), py::arg("phase"), py::arg("n"));
  m.def("classical_dimer_weight", &classical_dimer_weight, py::arg("separation"), py::arg("lambda_th"));

  py::class_<IntegratedWeight>(m, "IntegratedWeight")
      .def_readonly("log_scale", &IntegratedWeight::log_scale)
      .def_readonly("value", &IntegratedWeight::value)
      .def_readonly("monomer", &IntegratedWeight::monomer)
      .def_readonly("imag_residual", &IntegratedWeight::imag_residual)
      .def_property_readonly("weight", &IntegratedWeight::weight)
      .def_property_readonly("kinetic_numerator", &IntegratedWeight::kinetic_numerator);
  m.def(
      "configuration_weight",
      [](const Configuration& q, const ModelParams& p) {
        const auto modes = p.commutation ? locate_minima(q, p) : std::vector<LocalMode>(q.size());
        const auto terms = enumerate_terms(q, p.sym_order, p.statistics, p.dimer_cut, p.lambda_th);
        return integrated_weight(q, modes, terms, p);
      },
      py::arg("q"), py::arg("params"), "Momentum-integrated weight of one configuration.");

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("mean", &Estimate::mean)
      .def_readonly("sigma", &Estimate::sigma)
      .def_property_readonly("err", &Estimate::err)
      .def("__repr__", [](const Estimate& e) {
        return "Estimate(mean=" + std::to_string(e.mean) + ", sigma=" + std::to_string(e.sigma) + ")";
      });

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("n_blocks", &RunConfig::n_blocks)
      .def_readwrite("cycles_per_block", &RunConfig::cycles_per_block)
      .def_readwrite("eval_stride", &RunConfig::eval_stride)
      .def_readwrite("step_size", &RunConfig::step_size)
      .def_readwrite("max_step", &RunConfig::max_step)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("equilibration_cycles", &RunConfig::equilibration_cycles)
      .def_readwrite("density_bins", &RunConfig::density_bins)
      .def_readwrite("density_range", &RunConfig::density_range)
      .def_readwrite("log_weight_offset", &RunConfig::log_weight_offset)
      .def_readwrite("initial_positions", &RunConfig::initial_positions);

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("energy", &RunResult::energy)
      .def_readonly("kinetic", &RunResult::kinetic)
      .def_readonly("potential", &RunResult::potential)
      .def_readonly("beta_kinetic_per_particle", &RunResult::beta_kinetic_per_particle)
      .def_readonly("denominator", &RunResult::denominator)
      .def_readonly("pole_warning", &RunResult::pole_warning)
      .def_readonly("exchange_factor", &RunResult::exchange_factor)
      .def_readonly("block_energy", &RunResult::block_energy)
      .def_readonly("bin_centers", &RunResult::bin_centers)
      .def_readonly("density", &RunResult::density)
      .def_readonly("overflow_fraction", &RunResult::overflow_fraction)
      .def_readonly("acceptance", &RunResult::acceptance)
      .def_readonly("step_size", &RunResult::step_size)
      .def_readonly("seed", &RunResult::seed)
      .def_readonly("samples", &RunResult::samples)
      .def_readonly("inactive_fraction", &RunResult::inactive_fraction)
      .def_readonly("flags", &RunResult::flags);

  m.def("run", &run, py::arg("params"), py::arg("config") = RunConfig{},
        py::call_guard<py::gil_scoped_release>(), "Sample one temperature point.");

  m.def("sho_exact_energy", &sho_exact_energy, py::arg("beta"), py::arg("omega"));
  m.def(
      "grid_levels",
      [](const ModelParams& p, double extent, double spacing, std::size_t n_levels, double tolerance) {
        GridSpec g;
        g.extent = extent;
        g.spacing = spacing;
        g.n_levels = n_levels;
        g.tolerance = tolerance;
        return grid_diagonalize(p, g).levels;
      },
      py::arg("params"), py::kw_only(), py::arg("extent") = 8.0, py::arg("spacing") = 0.01,
      py::arg("n_levels") = 50, py::arg("tolerance") = 0.0, py::call_guard<py::gil_scoped_release>(),
      "Exact levels of the N <= 2 system by grid diagonalization.");
  m.def(
      "canonical_energy",
      [](std::vector<double> levels, double beta, double shift) {
        EigenSpectrum s;
        s.levels = std::move(levels);
        std::sort(s.levels.begin(), s.levels.end());
        const CanonicalAverage c = canonical_average(s, beta, shift);
        return py::make_tuple(c.energy, c.truncation_warning);
      },
      py::arg("levels"), py::arg("beta"), py::arg("shift") = 0.0,
      "Canonical mean energy and truncation flag of a level list.");

  py::class_<RunSetup>(m, "RunSetup")
      .def_readonly("de_boer", &RunSetup::de_boer)
      .def_readonly("trap_ratio", &RunSetup::trap_ratio)
      .def_property_readonly("beta_lj", [](const RunSetup& s) { return s.scan.beta_lj; })
      .def_property_readonly("mode", [](const RunSetup& s) { return to_string(s.scan.mode); })
      .def_readonly("run", &RunSetup::run)
      .def("params_at", &RunSetup::params_at, py::arg("beta_lj"));
  m.def("parse_config_file", &parse_config_file, py::arg("path"));
  m.def(
      "parse_config",
      [](const std::string& text) {
        std::istringstream in(text);
        return parse_config(in);
      },
      py::arg("text"));
  m.def("provenance_header", &provenance_header, py::arg("setup"));

  py::class_<ScanPoint>(m, "ScanPoint")
      .def_readonly("beta_lj", &ScanPoint::beta_lj)
      .def_readonly("params", &ScanPoint::params)
      .def_readonly("result", &ScanPoint::result);
  m.def(
      "run_scan",
      [](const RunSetup& s, const std::filesystem::path& out, int jobs) {
        ScanOptions o;
        o.jobs = jobs;
        return run_scan(s, out, o);
      },
      py::arg("setup"), py::arg("out_dir"), py::arg("jobs") = 1, py::call_guard<py::gil_scoped_release>(),
      "Run every scan temperature and write the CSV outputs.");
}
