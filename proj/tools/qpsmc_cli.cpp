#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qpsmc/config.hpp"
#include "qpsmc/scan.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical Monte Carlo for trapped Lennard-Jones particles in one dimension"};
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::optional<std::string> mode;
  std::optional<std::string> statistics;
  bool quiet = false;

  app.add_option("--config", config_path, "Run configuration (key = value lines)")->required();
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--seed", seed, "Base seed (point i uses seed + i)");
  app.add_option("--jobs", jobs, "Scan points run concurrently")->check(CLI::PositiveNumber);
  app.add_option("--mode", mode,
                 "classical | quantum-monomer | quantum-dimer | quantum-double-dimer");
  app.add_option("--statistics", statistics, "boson | fermion");
  app.add_flag("--quiet", quiet, "No progress output");
  CLI11_PARSE(app, argc, argv);

  try {
    qpsmc::RunSetup setup = qpsmc::parse_config_file(config_path);
    if (mode) {
      setup.scan.mode = qpsmc::mode_from_string(*mode);
      qpsmc::apply_mode(setup.scan.mode, setup.options);
    }
    if (statistics) setup.options.statistics = qpsmc::statistics_from_string(*statistics);
    if (seed) setup.run.seed = *seed;
    qpsmc::validate(setup);

    qpsmc::ScanOptions options;
    options.jobs = jobs;
    if (!quiet) options.log = [](const std::string& line) { std::cerr << line << '\n'; };
    if (!quiet) std::cerr << qpsmc::provenance_header(setup);
    qpsmc::run_scan(setup, out_dir, options);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
