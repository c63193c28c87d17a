#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qpsmc {

// Reduced units throughout: hbar = m = r_e = 1. Energies are in units of
// hbar^2/(m r_e^2), lengths in r_e, momenta in hbar/r_e.

enum class Statistics { boson, fermion };

// How the momentum integrals over an active commutation function are done.
//   monomial: Hermite series expanded to powers of P, each power integrated
//             with gaussian_moment.
//   hermite:  same truncated series, integrated through the Fourier
//             eigen-relation of Hermite functions (stable for large n_max).
//   mehler:   untruncated series in closed form.
enum class QuadratureRoute { monomial, hermite, mehler };

// Which quantity decides that a particle's commutation function is unity.
enum class CutCriterion { energy, displacement };

// Momentum integral of a dimer phase.
//   coupled:   integrated jointly with W_j and the Maxwell-Boltzmann factor.
//   classical: factorized; each dimer contributes its W = 1 Gaussian
//              exp(-2 pi q^2 / Lambda^2) on top of the monomer weight.
enum class DimerRule { coupled, classical };

std::string to_string(Statistics s);
std::string to_string(QuadratureRoute r);
std::string to_string(CutCriterion c);
std::string to_string(DimerRule r);
Statistics statistics_from_string(const std::string& s);
QuadratureRoute quadrature_from_string(const std::string& s);
CutCriterion cut_criterion_from_string(const std::string& s);
DimerRule dimer_rule_from_string(const std::string& s);

// Everything that is not one of the three physical inputs.
struct AlgorithmOptions {
  int n_particles = 1;
  int dimension = 1;
  int hermite_order = 6;
  int newton_iters = 6;
  // Backtracking Newton steps; false gives the bare iteration.
  bool newton_safeguard = false;
  // Units of hbar*omega (trap). Unset: 5, or 2 when beta*hbar*omega_LJ < 2.
  std::optional<double> u_cut;
  int sym_order = 1;
  Statistics statistics = Statistics::boson;
  // Units of r_e. Unset: every pair interacts.
  std::optional<double> lj_rcut;
  // false: classical commutation function, W = 1 for every particle.
  bool commutation = true;
  QuadratureRoute quadrature = QuadratureRoute::monomial;
  CutCriterion cut_criterion = CutCriterion::energy;
  DimerRule dimer_rule = DimerRule::coupled;
  // Skip dimers whose classical weight exp(-2 pi q^2/Lambda^2) is below this.
  std::optional<double> dimer_cut;
};

struct ModelParams {
  int n_particles = 1;
  int dimension = 1;
  double de_boer = 0.0;    // 2^{1/6} hbar / (r_e sqrt(m eps))
  double trap_ratio = 0.0; // omega r_e sqrt(m/eps)
  double beta_lj = 0.0;    // beta hbar omega_LJ

  int hermite_order = 6;
  int newton_iters = 6;
  bool newton_safeguard = false;
  double u_cut = 5.0; // units of hbar*omega
  int sym_order = 1;
  Statistics statistics = Statistics::boson;
  std::optional<double> lj_rcut;
  bool commutation = true;
  QuadratureRoute quadrature = QuadratureRoute::monomial;
  CutCriterion cut_criterion = CutCriterion::energy;
  DimerRule dimer_rule = DimerRule::coupled;
  std::optional<double> dimer_cut;

  // Derived, reduced units.
  double epsilon = 0.0;   // LJ well depth
  double omega = 0.0;     // trap frequency
  double omega_lj = 0.0;  // sqrt(72 eps)
  double beta = 0.0;      // inverse temperature
  double lambda_th = 0.0; // sqrt(2 pi beta)

  double omega_lj_over_omega() const { return omega_lj / omega; }
  double epsilon_over_hbar_omega() const { return epsilon / omega; }
  // u_cut in reduced energy units.
  double u_cut_energy() const { return u_cut * omega; }
};

// Derives the reduced-unit parameter set. Throws ParameterError on
// non-positive physical inputs or out-of-range algorithmic fields.
ModelParams build_params(double de_boer, double trap_ratio, double beta_lj,
                         const AlgorithmOptions& options = {});

// Same model at a different temperature (re-derives beta, Lambda and the
// temperature-dependent u_cut default when it was not set explicitly).
ModelParams with_beta_lj(const ModelParams& p, double beta_lj,
                         std::optional<double> explicit_u_cut);

// beta*hbar*omega_LJ corresponding to beta*hbar*omega (trap).
double beta_lj_from_trap_units(double beta_hbar_omega, double trap_ratio);

// Particle positions kept in ascending order, so index j is the j-th particle
// from the left. Nearest-neighbour loops and the cut-off window rely on this.
class Configuration {
public:
  Configuration() = default;
  explicit Configuration(std::vector<double> positions);

  std::size_t size() const { return q_.size(); }
  double operator[](std::size_t j) const { return q_[j]; }
  std::span<const double> positions() const { return q_; }

  // Moves particle j to x and restores ascending order; returns the new index.
  // The caller guarantees x is not coincident with another particle.
  std::size_t move(std::size_t j, double x);

private:
  std::vector<double> q_;
};

inline constexpr double kCoincidence = 1e-6;

// Lennard-Jones pair energy eps[(1/r)^12 - 2(1/r)^6] and its r-derivatives.
double lj_pair(double r, double epsilon);
double lj_pair_d1(double r, double epsilon);
double lj_pair_d2(double r, double epsilon);

// Full pair sums felt by particle j when placed at x, over partners k != j
// (within lj_rcut when set). Returns u = +inf when x coincides with a partner.
struct PairField {
  double u = 0.0;
  double du = 0.0;
  double d2u = 0.0;
};
PairField pair_field(const Configuration& q, std::size_t j, double x,
                     const ModelParams& p);

double trap_energy(double x, const ModelParams& p);

double potential_total(const Configuration& q, const ModelParams& p);

// U_j = u1(q_j) + (1/2) sum_{k != j} u2(q_j, q_k).
double particle_energy(std::size_t j, const Configuration& q,
                       const ModelParams& p);
// U_j with particle j displaced to x, others fixed.
double particle_energy_at(std::size_t j, double x, const Configuration& q,
                          const ModelParams& p);

struct ParticleDerivatives {
  double gradient = 0.0;
  double hessian = 0.0;
};
ParticleDerivatives particle_derivatives(std::size_t j, const Configuration& q,
                                         const ModelParams& p);
ParticleDerivatives particle_derivatives_at(std::size_t j, double x,
                                            const Configuration& q,
                                            const ModelParams& p);

// Lowest value of the total potential, found by relaxing the symmetric chain.
// Used as the common energy zero when comparing with exact spectra.
double potential_minimum(const ModelParams& p);

} // namespace qpsmc
