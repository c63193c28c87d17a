#include "qpsmc/config.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "qpsmc/errors.hpp"

namespace qpsmc {

std::string to_string(Mode m) {
  switch (m) {
  case Mode::classical: return "classical";
  case Mode::quantum_monomer: return "quantum-monomer";
  case Mode::quantum_dimer: return "quantum-dimer";
  case Mode::quantum_double_dimer: return "quantum-double-dimer";
  }
  return "?";
}

Mode mode_from_string(const std::string& s) {
  if (s == "classical") return Mode::classical;
  if (s == "quantum-monomer") return Mode::quantum_monomer;
  if (s == "quantum-dimer") return Mode::quantum_dimer;
  if (s == "quantum-double-dimer") return Mode::quantum_double_dimer;
  throw ParameterError("mode: unknown value '" + s +
                       "' (classical, quantum-monomer, quantum-dimer, quantum-double-dimer)");
}

void apply_mode(Mode m, AlgorithmOptions& o) {
  o.commutation = m != Mode::classical;
  switch (m) {
  case Mode::classical:
  case Mode::quantum_monomer: o.sym_order = 1; break;
  case Mode::quantum_dimer: o.sym_order = 2; break;
  case Mode::quantum_double_dimer: o.sym_order = 3; break;
  }
}

ModelParams RunSetup::params_at(double beta_lj) const {
  return build_params(de_boer, trap_ratio, beta_lj, options);
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw ParameterError(key + ": " + what);
}

double as_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    bad(key, "expected a number, got '" + v + "'");
  }
  if (used != v.size() || !std::isfinite(x)) bad(key, "expected a number, got '" + v + "'");
  return x;
}

long as_long(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long x = 0;
  try {
    x = std::stol(v, &used);
  } catch (const std::exception&) {
    bad(key, "expected an integer, got '" + v + "'");
  }
  if (used != v.size()) bad(key, "expected an integer, got '" + v + "'");
  return x;
}

int as_int(const std::string& key, const std::string& v) {
  const long x = as_long(key, v);
  if (x < -2147483647L || x > 2147483647L) bad(key, "integer out of range");
  return static_cast<int>(x);
}

bool as_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  bad(key, "expected true/false, got '" + v + "'");
}

std::vector<double> as_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) bad(key, "empty list entry");
    out.push_back(as_double(key, item));
  }
  return out;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "n_particles", "dimension", "de_boer", "trap_ratio", "beta_lj",
      "hermite_order", "newton_iters", "newton_safeguard", "u_cut", "sym_order", "statistics",
      "lj_rcut", "quadrature", "cut_criterion", "dimer_rule", "dimer_cut", "mode",
      "n_blocks", "cycles_per_block", "eval_stride", "step_size", "max_step",
      "seed", "equilibration_cycles", "density_bins", "density_range",
      "energy_file", "write_density", "spectrum_file"};
  return keys;
}

} // namespace

RunSetup parse_config(std::istream& in) {
  RunSetup s;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParameterError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_keys().contains(key)) bad(key, "unknown key");
    if (value.empty()) bad(key, "missing value");
    if (s.raw.contains(key)) bad(key, "given more than once");
    s.raw[key] = value;
  }

  for (const char* req : {"n_particles", "de_boer", "trap_ratio", "beta_lj"}) {
    if (!s.raw.contains(req)) bad(req, "required key missing");
  }
  const auto get = [&](const std::string& k) -> const std::string* {
    const auto it = s.raw.find(k);
    return it == s.raw.end() ? nullptr : &it->second;
  };

  AlgorithmOptions& o = s.options;
  s.de_boer = as_double("de_boer", *get("de_boer"));
  s.trap_ratio = as_double("trap_ratio", *get("trap_ratio"));
  s.scan.beta_lj = as_list("beta_lj", *get("beta_lj"));
  o.n_particles = as_int("n_particles", *get("n_particles"));

  if (auto v = get("mode")) s.scan.mode = mode_from_string(*v);
  apply_mode(s.scan.mode, o);
  if (auto v = get("sym_order")) o.sym_order = as_int("sym_order", *v);
  if (auto v = get("dimension")) o.dimension = as_int("dimension", *v);
  if (auto v = get("hermite_order")) o.hermite_order = as_int("hermite_order", *v);
  if (auto v = get("newton_iters")) o.newton_iters = as_int("newton_iters", *v);
  if (auto v = get("newton_safeguard")) o.newton_safeguard = as_bool("newton_safeguard", *v);
  if (auto v = get("u_cut")) o.u_cut = as_double("u_cut", *v);
  if (auto v = get("statistics")) {
    try {
      o.statistics = statistics_from_string(*v);
    } catch (const ParameterError&) {
      bad("statistics", "expected boson or fermion, got '" + *v + "'");
    }
  }
  if (auto v = get("lj_rcut")) o.lj_rcut = as_double("lj_rcut", *v);
  if (auto v = get("quadrature")) {
    try {
      o.quadrature = quadrature_from_string(*v);
    } catch (const ParameterError&) {
      bad("quadrature", "expected monomial, hermite or mehler, got '" + *v + "'");
    }
  }
  if (auto v = get("cut_criterion")) {
    try {
      o.cut_criterion = cut_criterion_from_string(*v);
    } catch (const ParameterError&) {
      bad("cut_criterion", "expected energy or displacement, got '" + *v + "'");
    }
  }
  if (auto v = get("dimer_rule")) {
    try {
      o.dimer_rule = dimer_rule_from_string(*v);
    } catch (const ParameterError&) {
      bad("dimer_rule", "expected coupled or classical, got '" + *v + "'");
    }
  }
  if (auto v = get("dimer_cut")) o.dimer_cut = as_double("dimer_cut", *v);

  RunConfig& rc = s.run;
  if (auto v = get("n_blocks")) rc.n_blocks = as_int("n_blocks", *v);
  if (auto v = get("cycles_per_block")) rc.cycles_per_block = as_long("cycles_per_block", *v);
  if (auto v = get("eval_stride")) rc.eval_stride = as_int("eval_stride", *v);
  if (auto v = get("step_size")) rc.step_size = as_double("step_size", *v);
  if (auto v = get("max_step")) rc.max_step = as_double("max_step", *v);
  if (auto v = get("seed")) {
    const long seed = as_long("seed", *v);
    if (seed < 0) bad("seed", "must be non-negative");
    rc.seed = static_cast<std::uint64_t>(seed);
  }
  if (auto v = get("equilibration_cycles")) {
    rc.equilibration_cycles = as_long("equilibration_cycles", *v);
  }
  if (auto v = get("density_bins")) rc.density_bins = as_int("density_bins", *v);
  if (auto v = get("density_range")) rc.density_range = as_double("density_range", *v);
  if (auto v = get("energy_file")) s.scan.energy_file = *v;
  if (auto v = get("write_density")) s.scan.write_density = as_bool("write_density", *v);
  if (auto v = get("spectrum_file")) s.scan.spectrum_file = *v;

  validate(s);
  return s;
}

void validate(const RunSetup& s) {
  const auto& o = s.options;
  if (o.n_particles < 1) bad("n_particles", "must be >= 1");
  if (o.sym_order < 1 || o.sym_order > 3) bad("sym_order", "must be 1, 2 or 3");
  if (!o.commutation && o.sym_order != 1) bad("sym_order", "classical mode has no symmetrization");
  if (o.dimension != 1) bad("dimension", "only d = 1 is implemented");
  if (o.hermite_order < 0) bad("hermite_order", "must be >= 0");
  if (o.newton_iters < 1) bad("newton_iters", "must be >= 1");
  if (o.u_cut && !(*o.u_cut > 0.0)) bad("u_cut", "must be positive");
  if (o.lj_rcut && !(*o.lj_rcut > 0.0)) bad("lj_rcut", "must be positive");
  if (o.dimer_cut && !(*o.dimer_cut >= 0.0 && *o.dimer_cut < 1.0)) bad("dimer_cut", "must lie in [0, 1)");
  if (!(s.de_boer > 0.0)) bad("de_boer", "must be positive");
  if (!(s.trap_ratio > 0.0)) bad("trap_ratio", "must be positive");
  if (s.scan.beta_lj.empty()) bad("beta_lj", "needs at least one value");
  std::set<double> seen;
  for (double b : s.scan.beta_lj) {
    if (!(b > 0.0)) bad("beta_lj", "values must be positive");
    if (!seen.insert(b).second) bad("beta_lj", "values must be distinct");
  }
  const auto& rc = s.run;
  if (rc.n_blocks < 2) bad("n_blocks", "must be >= 2");
  if (rc.eval_stride < 1) bad("eval_stride", "must be >= 1");
  if (rc.cycles_per_block < rc.eval_stride) bad("cycles_per_block", "must be >= eval_stride");
  if (!(rc.max_step > 0.0)) bad("max_step", "must be positive");
  if (rc.equilibration_cycles && *rc.equilibration_cycles < 0) {
    bad("equilibration_cycles", "must be >= 0");
  }
  if (rc.density_bins < 1) bad("density_bins", "must be >= 1");
  if (!(rc.density_range > 0.0)) bad("density_range", "must be positive");
  if (s.scan.energy_file.empty()) bad("energy_file", "must not be empty");
}

RunSetup parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config file '" + path + "'");
  return parse_config(in);
}

} // namespace qpsmc
