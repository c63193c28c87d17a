#include "qpsmc/scan.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "qpsmc/errors.hpp"
#include "qpsmc/oracle.hpp"

namespace qpsmc {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) out += (out.empty() ? "" : ";") + f;
  return out;
}

template <class T>
std::string opt(const std::optional<T>& v) {
  return v ? num(*v) : "default";
}

void open_or_throw(std::ofstream& f, const std::filesystem::path& path) {
  f.open(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
}

} // namespace

std::string provenance_header(const RunSetup& s) {
  const auto& o = s.options;
  const auto& rc = s.run;
  std::ostringstream h;
  h << "# qpsmc run\n"
    << "# n_particles = " << o.n_particles << "\n"
    << "# dimension = " << o.dimension << "\n"
    << "# de_boer = " << num(s.de_boer) << "\n"
    << "# trap_ratio = " << num(s.trap_ratio) << "\n"
    << "# mode = " << to_string(s.scan.mode) << "\n"
    << "# statistics = " << to_string(o.statistics) << "\n"
    << "# sym_order = " << o.sym_order << "\n"
    << "# commutation = " << (o.commutation ? "true" : "false") << "\n"
    << "# hermite_order = " << o.hermite_order << "\n"
    << "# newton_iters = " << o.newton_iters << "\n"
    << "# newton_safeguard = " << (o.newton_safeguard ? "true" : "false") << "\n"
    << "# u_cut = " << opt(o.u_cut) << "\n"
    << "# cut_criterion = " << to_string(o.cut_criterion) << "\n"
    << "# quadrature = " << to_string(o.quadrature) << "\n"
    << "# lj_rcut = " << (o.lj_rcut ? num(*o.lj_rcut) : "none") << "\n"
    << "# dimer_rule = " << to_string(o.dimer_rule) << "\n"
    << "# dimer_cut = " << (o.dimer_cut ? num(*o.dimer_cut) : "none") << "\n"
    << "# n_blocks = " << rc.n_blocks << "\n"
    << "# cycles_per_block = " << rc.cycles_per_block << "\n"
    << "# eval_stride = " << rc.eval_stride << "\n"
    << "# step_size = " << (rc.step_size > 0.0 ? num(rc.step_size) : "tuned") << "\n"
    << "# max_step = " << num(rc.max_step) << "\n"
    << "# seed = " << rc.seed << "\n"
    << "# equilibration_cycles = " << opt(rc.equilibration_cycles) << "\n"
    << "# density_bins = " << rc.density_bins << "\n"
    << "# density_range = " << num(rc.density_range) << "\n";
  h << "# beta_lj =";
  for (std::size_t i = 0; i < s.scan.beta_lj.size(); ++i) {
    h << (i ? ", " : " ") << num(s.scan.beta_lj[i]);
  }
  h << "\n";
  if (!s.scan.beta_lj.empty()) {
    const ModelParams p = s.params_at(s.scan.beta_lj.front());
    h << "# epsilon/hbar_omega = " << num(p.epsilon_over_hbar_omega()) << "\n"
      << "# omega_lj/omega = " << num(p.omega_lj_over_omega()) << "\n";
  }
  for (double b : s.scan.beta_lj) {
    const ModelParams p = s.params_at(b);
    h << "# beta_lj " << num(b) << ": beta_hbar_omega = " << num(p.beta * p.omega)
      << ", lambda_th/r_e = " << num(p.lambda_th) << ", u_cut = " << num(p.u_cut) << "\n";
  }
  h << "# energies in units of hbar_omega (trap); seeds are seed + point index\n";
  return h.str();
}

std::string density_file_name(double beta_lj) { return "density_beta" + num(beta_lj) + ".csv"; }

void write_energy_csv(std::ostream& out, const RunSetup& s, const std::vector<ScanPoint>& points) {
  out << provenance_header(s);
  out << "beta_lj,mode,statistics,E_mean,E_err,K_mean,K_err,U_mean,U_err,denom_mean,denom_err,"
         "acceptance,seed,flags,exchange_mean,exchange_err\n";
  for (const ScanPoint& pt : points) {
    const double w = pt.params.omega;
    const RunResult& r = pt.result;
    out << num(pt.beta_lj) << ',' << to_string(s.scan.mode) << ',' << to_string(pt.params.statistics)
        << ',' << num(r.energy.mean / w) << ',' << num(r.energy.err() / w) << ','
        << num(r.kinetic.mean / w) << ',' << num(r.kinetic.err() / w) << ','
        << num(r.potential.mean / w) << ',' << num(r.potential.err() / w) << ','
        << num(r.denominator.mean) << ',' << num(r.denominator.err()) << ',' << num(r.acceptance)
        << ',' << r.seed << ',' << join_flags(r.flags) << ',' << num(r.exchange_factor.mean) << ','
        << num(r.exchange_factor.err()) << '\n';
  }
}

void write_density_csv(std::ostream& out, const RunSetup& s, const ScanPoint& pt) {
  out << provenance_header(s);
  out << "# point beta_lj = " << num(pt.beta_lj) << ", seed = " << pt.result.seed
      << ", overflow_fraction = " << num(pt.result.overflow_fraction) << "\n"
      << "# rho integrates to N; rho_per_particle integrates to 1\n";
  out << "bin_center,rho,rho_err,rho_per_particle,rho_per_particle_err\n";
  const double n = pt.params.n_particles;
  for (std::size_t i = 0; i < pt.result.density.size(); ++i) {
    const Estimate& d = pt.result.density[i];
    out << num(pt.result.bin_centers[i]) << ',' << num(d.mean) << ',' << num(d.err()) << ','
        << num(d.mean / n) << ',' << num(d.err() / n) << '\n';
  }
}

void write_exact_csv(std::ostream& out, const RunSetup& s, const std::vector<ScanPoint>& points) {
  if (!s.scan.spectrum_file || points.empty()) return;
  const SpectrumFile file = read_spectrum_file(*s.scan.spectrum_file);
  const ModelParams& p0 = points.front().params;
  double unit = 1.0;
  if (file.units == "hbar_omega") {
    unit = p0.omega;
  } else if (file.units == "epsilon") {
    unit = p0.epsilon;
  } else if (!file.units.empty() && file.units != "reduced") {
    throw ParameterError("spectrum_file: unknown units '" + file.units +
                         "' (hbar_omega, epsilon, reduced)");
  }
  EigenSpectrum spec = file.spectrum;
  for (double& e : spec.levels) e *= unit;

  const ScanPoint* hot = &points.front();
  for (const ScanPoint& pt : points) {
    if (pt.beta_lj < hot->beta_lj) hot = &pt;
  }
  const double shift = hot->result.energy.mean - canonical_average(spec, hot->params.beta).energy;

  out << provenance_header(s);
  out << "# spectrum_file = " << *s.scan.spectrum_file << ", " << spec.size() << " levels, units "
      << (file.units.empty() ? "reduced" : file.units) << "\n"
      << "# shift = " << num(shift / p0.omega) << " hbar_omega (aligned at beta_lj = "
      << num(hot->beta_lj) << ")\n";
  out << "beta_lj,E_exact,truncation_warning\n";
  for (const ScanPoint& pt : points) {
    const CanonicalAverage c = canonical_average(spec, pt.params.beta, shift);
    out << num(pt.beta_lj) << ',' << num(c.energy / pt.params.omega) << ','
        << (c.truncation_warning ? 1 : 0) << '\n';
  }
}

std::vector<ScanPoint> run_scan(const RunSetup& s, const std::filesystem::path& out_dir,
                                const ScanOptions& options) {
  validate(s);
  std::filesystem::create_directories(out_dir);
  const std::size_t n = s.scan.beta_lj.size();
  std::vector<ScanPoint> points(n);
  for (std::size_t i = 0; i < n; ++i) {
    points[i].beta_lj = s.scan.beta_lj[i];
    points[i].params = s.params_at(points[i].beta_lj);
    points[i].run = s.run;
    points[i].run.seed = s.run.seed + i;
  }

  std::mutex log_mutex;
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        ScanPoint& pt = points[i];
        pt.result = run(pt.params, pt.run);
        if (s.scan.write_density) {
          std::ofstream f;
          open_or_throw(f, out_dir / density_file_name(pt.beta_lj));
          write_density_csv(f, s, pt);
        }
        if (options.log) {
          std::lock_guard lock(log_mutex);
          options.log("beta_lj " + num(pt.beta_lj) + ": E/hbar_omega = " +
                      num(pt.result.energy.mean / pt.params.omega) + " +- " +
                      num(pt.result.energy.err() / pt.params.omega) +
                      ", acceptance " + num(pt.result.acceptance));
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(n)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::ofstream f;
  open_or_throw(f, out_dir / s.scan.energy_file);
  write_energy_csv(f, s, points);
  if (s.scan.spectrum_file) {
    std::ofstream g;
    open_or_throw(g, out_dir / "exact.csv");
    write_exact_csv(g, s, points);
  }
  return points;
}

} // namespace qpsmc
