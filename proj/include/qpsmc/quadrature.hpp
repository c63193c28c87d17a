#pragma once

#include <complex>
#include <span>

#include "qpsmc/meanfield.hpp"
#include "qpsmc/model.hpp"
#include "qpsmc/symmetrization.hpp"

namespace qpsmc {

// int dP exp(-alpha P^2/2) exp(i P phase) P^n, closed form.
std::complex<double> gaussian_moment(double alpha, double phase, int n);
// The same divided by exp(-phase^2 / (2 alpha)).
std::complex<double> gaussian_moment_unscaled(double alpha, double phase, int n);

// Momentum integral for one particle in raw units (m = hbar = 1):
//   int dp exp(-beta p^2/2) W_j(p) exp(i phase p) p^kinetic_order
// where phase is the sum of the dimer phases touching the particle and
// W_j = 1 for inactive modes or classical runs. `w` is the precomputed series
// for the monomial route (computed on demand when null).
std::complex<double> integrate_particle(const LocalMode& mode, const MomentumPolynomial* w,
                                        std::span<const double> dimer_phases, int kinetic_order,
                                        const ModelParams& p);

// Same integral as exp(log_factor) * value, so large displacements neither
// overflow nor underflow. Both kinetic orders share the factor.
struct ScaledIntegral {
  double log_factor = 0.0;
  std::complex<double> value{0.0, 0.0};
};
ScaledIntegral integrate_particle_scaled(const LocalMode& mode, const MomentumPolynomial* w,
                                         std::span<const double> dimer_phases, int kinetic_order,
                                         const ModelParams& p);

// Per-configuration weight w = sum_terms sign * prod_j I_j / prod_j sqrt(2 pi/beta),
// held as exp(log_scale) * value so long chains of small factors stay
// representable. The kinetic companion is the same sum with one p^2/2
// insertion per particle, summed over particles.
struct IntegratedWeight {
  double log_scale = 0.0;
  double value = 0.0;
  double kinetic = 0.0;
  double monomer = 0.0;       // monomer-term share of value
  double imag_residual = 0.0; // |Im w| / |w| before discarding

  double log_magnitude() const;
  int sign() const { return value < 0.0 ? -1 : 1; }
  double weight() const;          // exp(log_scale) * value
  double kinetic_numerator() const; // exp(log_scale) * kinetic
};

IntegratedWeight integrated_weight(const Configuration& q, std::span<const LocalMode> modes,
                                   std::span<const SymTerm> terms, const ModelParams& p);

} // namespace qpsmc
