#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qpsmc/model.hpp"

namespace qpsmc {

// Sorted energy levels in reduced units.
struct EigenSpectrum {
  std::vector<double> levels;
  double shift = 0.0;

  std::size_t size() const { return levels.size(); }
};

// (hbar omega / 2) coth(beta hbar omega / 2), summed level by level.
double sho_exact_energy(double beta, double omega);

struct GridSpec {
  double extent = 8.0;   // half-width of the one-body/centre-of-mass grid; r_max for the pair
  double spacing = 0.01; // coarse spacing; the solver also runs at spacing/2
  double r_min = 0.55;   // inner wall of the pair coordinate (deep inside the r^-12 core)
  std::size_t n_levels = 50;
  // Refinement check on the ground state, reduced energy units; <= 0 disables.
  double tolerance = 0.0;
};

// Exact spectrum of the N <= 2 trapped system on a uniform grid with a
// second-order finite-difference Laplacian, Richardson-extrapolated from
// spacing h and h/2. N = 2 separates into centre of mass (mass 2) and pair
// coordinate (mass 1/2); the r^-12 core makes the r > 0 and r < 0 halves
// degenerate, so boson, fermion and distinguishable spectra coincide and
// the r > 0 levels are returned.
EigenSpectrum grid_diagonalize(const ModelParams& p, const GridSpec& grid);

struct CanonicalAverage {
  double energy = 0.0;
  bool truncation_warning = false; // exp(-beta (E_max - E_0)) >= 1e-6
};

CanonicalAverage canonical_average(const EigenSpectrum& spec, double beta, double shift = 0.0);

// One value per line; '#' lines are comments, one of which may declare
// "units: <name>". Blank lines are skipped.
struct SpectrumFile {
  EigenSpectrum spectrum;
  std::string units;
};
SpectrumFile read_spectrum(std::istream& in);
SpectrumFile read_spectrum_file(const std::string& path);
void write_spectrum(std::ostream& out, const EigenSpectrum& spec, const std::string& units);

} // namespace qpsmc
