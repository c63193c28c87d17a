#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qpsmc/config.hpp"
#include "qpsmc/sampler.hpp"

namespace qpsmc {

struct ScanPoint {
  double beta_lj = 0.0;
  ModelParams params;
  RunConfig run;
  RunResult result;
};

struct ScanOptions {
  int jobs = 1;
  // Progress lines; empty means silent.
  std::function<void(const std::string&)> log;
};

// Runs every scan temperature (point i uses seed + i) and writes the energy
// CSV plus one density CSV per point into out_dir. Output bytes depend only
// on the setup, never on the job count.
std::vector<ScanPoint> run_scan(const RunSetup& setup, const std::filesystem::path& out_dir,
                                const ScanOptions& options = {});

// '#' lines recording every resolved parameter.
std::string provenance_header(const RunSetup& setup);

void write_energy_csv(std::ostream& out, const RunSetup& setup, const std::vector<ScanPoint>& points);
void write_density_csv(std::ostream& out, const RunSetup& setup, const ScanPoint& point);
std::string density_file_name(double beta_lj);

// Canonical average of an exact spectrum at every scan temperature, shifted
// to coincide with the sampled energy at the smallest beta.
void write_exact_csv(std::ostream& out, const RunSetup& setup, const std::vector<ScanPoint>& points);

} // namespace qpsmc
