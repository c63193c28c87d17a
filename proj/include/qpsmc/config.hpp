#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qpsmc/model.hpp"
#include "qpsmc/sampler.hpp"

namespace qpsmc {

// What the run treats quantum mechanically.
enum class Mode { classical, quantum_monomer, quantum_dimer, quantum_double_dimer };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);
// Commutation flag and symmetrization order implied by a mode.
void apply_mode(Mode m, AlgorithmOptions& o);

struct ScanSpec {
  std::vector<double> beta_lj;
  Mode mode = Mode::quantum_monomer;
  std::string energy_file = "energy.csv";
  bool write_density = true;
  // Optional exact eigenvalue list; its canonical average is written next to
  // the scan, shifted to coincide with the run at the smallest beta.
  std::optional<std::string> spectrum_file;
};

struct RunSetup {
  double de_boer = 0.0;
  double trap_ratio = 0.0;
  AlgorithmOptions options;
  ScanSpec scan;
  RunConfig run;
  // Key/value pairs exactly as read, for provenance headers.
  std::map<std::string, std::string> raw;

  // Model parameters at one scan temperature.
  ModelParams params_at(double beta_lj) const;
};

// Flat `key = value` text with '#' comments. Unknown keys, missing required
// keys, malformed values and domain violations throw ParameterError naming
// the key.
RunSetup parse_config(std::istream& in);
RunSetup parse_config_file(const std::string& path);

// Re-checks the whole setup (after command-line overrides).
void validate(const RunSetup& setup);

} // namespace qpsmc
