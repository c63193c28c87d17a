#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qpsmc/model.hpp"

namespace qpsmc {

// Instantaneous harmonic oscillator seen by one particle.
struct LocalMode {
  bool active = false; // false: W_j = 1
  double q_bar = 0.0;  // location of the local minimum of U_j
  double u_bar = 0.0;  // U_j at q_bar
  double curvature = 0.0;
  double omega = 0.0;        // sqrt(curvature / m)
  double displacement = 0.0; // Q_j = sqrt(m omega_j / hbar) (q_j - q_bar)
  double excess = 0.0;       // U_j(q_j) - u_bar
};

// Largest remaining Newton step, in units of the zero-point width
// sqrt(hbar/(m omega_j)), accepted as a located minimum.
inline constexpr double kNewtonTolerance = 0.05;
// Safeguarded step taken where the curvature is not positive, units of r_e.
inline constexpr double kNewtonMaxStep = 0.25;

// Newton iteration from q_j for the minimum of U_j with all other particles
// fixed; classifies the mode as active or inactive. With newton_safeguard
// the steps are backtracked so the energy never rises.
LocalMode locate_minimum(std::size_t j, const Configuration& q, const ModelParams& p);
std::vector<LocalMode> locate_minima(const Configuration& q, const ModelParams& p);

// Physicists' Hermite polynomial H_n(z).
double hermite(int n, double z);

// Monomial coefficients a_k of H_n(z) = sum_k a_k z^k (exact in double for
// the degrees used here).
std::span<const double> hermite_coefficients(int n);

// Orthonormal Hermite functions phi_0..phi_{out.size()-1} at z:
// phi_n(z) = H_n(z) exp(-z^2/2) / sqrt(2^n n! sqrt(pi)).
void hermite_functions(double z, std::span<double> out);
// Same without the Gaussian: out[n] = phi_n(z) exp(z^2/2).
void hermite_functions_unscaled(double z, std::span<double> out);

// Single-mode commutation function in a form ready for momentum integration.
// Multiplied by the Maxwell-Boltzmann factor exp(-mb_width P^2/2) it reads
//   exp(log_scale) exp(-alpha P^2/2) exp(i P phase) sum_k coeffs[k] P^k
// with alpha = 1 and phase = -Q. W alone is exp(mb_width P^2/2) times that.
// log_scale carries the Q-dependent Gaussian, which overflows for large Q.
struct MomentumPolynomial {
  std::vector<std::complex<double>> coeffs;
  double alpha = 1.0;
  double phase = 0.0;
  double mb_width = 0.0; // beta hbar omega_j
  double log_scale = 0.0;
};

// Truncated series through degree n_max for an active mode.
MomentumPolynomial w_sho_polynomial(const LocalMode& mode, double beta_hbar_omega, int n_max);

// W(P) assembled from the polynomial form.
std::complex<double> evaluate(const MomentumPolynomial& w, double P);

// Direct evaluation of the truncated series at (P, Q).
std::complex<double> w_sho_series(double P, double Q, double beta_hbar_omega, int n_max);

// Untruncated series (Mehler kernel with rho = i exp(-beta hbar omega)).
std::complex<double> w_sho_closed_form(double P, double Q, double beta_hbar_omega);

} // namespace qpsmc
