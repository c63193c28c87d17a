#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qpsmc/model.hpp"
#include "qpsmc/observables.hpp"

namespace qpsmc {

struct RunConfig {
  int n_blocks = 500;
  long cycles_per_block = 600;
  int eval_stride = 6; // cycles between weight evaluations
  // Trial displacement half-width in r_e; <= 0 means tune_step picks it.
  double step_size = 0.0;
  double max_step = 2.0;
  std::uint64_t seed = 1;
  // Unset: 10% of n_blocks * cycles_per_block.
  std::optional<long> equilibration_cycles;
  int density_bins = 200;
  double density_range = 4.0;
  // Multiplies every weight by exp(log_weight_offset); estimates must not move.
  double log_weight_offset = 0.0;
  // Unset: evenly spaced chain at spacing r_e centred on the trap.
  std::optional<std::vector<double>> initial_positions;
};

void validate(const RunConfig& rc);

struct Estimate {
  double mean = 0.0;
  double sigma = 0.0; // one standard error from block fluctuations
  // Error bar quoted in outputs: twice the standard error (96% level).
  double err() const { return 2.0 * sigma; }
};

// Per-block sums of the umbrella denominator sum(w) and numerators sum(A w)
// for a fixed set of observables. Every sample feeds every observable, so the
// sample counts agree across observables by construction.
class BlockAccumulator {
public:
  BlockAccumulator(int n_blocks, int n_observables);

  int n_blocks() const { return static_cast<int>(den_.size()); }
  int n_observables() const { return n_obs_; }
  long count(int block) const { return count_[block]; }

  void add(int block, double w, std::span<const double> numerators);
  // Multiplies every stored sum by f (weight rescaling).
  void rescale(double f);

  // sum(num)/sum(den); sigma from the spread of per-block ratios.
  Estimate ratio(int observable) const;
  // Mean weight per sample; sigma from the spread of per-block means.
  Estimate mean_weight() const;
  // Per-block num/den for one observable.
  std::vector<double> block_ratios(int observable) const;
  // Per-block sum(w), in the accumulator's current scale.
  const std::vector<double>& block_weights() const { return den_; }

private:
  int n_obs_;
  std::vector<double> den_;
  std::vector<double> num_; // block-major
  std::vector<long> count_;
};

struct RunResult {
  Estimate energy;
  Estimate kinetic;
  Estimate potential;
  Estimate beta_kinetic_per_particle;
  // <W eta> in the normalization where a classical monomer weight is 1.
  Estimate denominator;
  bool pole_warning = false; // |denominator| below its own 2-sigma error
  // sum(w) / sum(monomer part of w): the symmetrization factor, 1 for a = 1.
  Estimate exchange_factor;
  // Per-block energy ratios, for paired comparisons between runs that share
  // a seed (and hence a trajectory).
  std::vector<double> block_energy;
  // Per-block sum of weights on an arbitrary common scale; with block_energy
  // this rebuilds the global ratio with any block left out.
  std::vector<double> block_weight;

  std::vector<double> bin_centers;
  std::vector<Estimate> density; // particles per unit length; integrates to N
  double overflow_fraction = 0.0;

  double acceptance = 0.0;
  double step_size = 0.0;
  std::uint64_t seed = 0;
  long samples = 0;
  double inactive_fraction = 0.0; // share of particle modes with W_j = 1
  double max_imag_residual = 0.0;
  std::vector<std::string> flags;
};

using Rng = std::mt19937_64;

// One attempted uniform displacement per particle, accepted with
// min(1, exp(-beta dU)). Returns the number of accepted moves.
int metropolis_cycle(Configuration& q, const ModelParams& p, double step, Rng& rng);

// Default starting configuration: evenly spaced chain, spacing r_e.
Configuration initial_configuration(const ModelParams& p);

// Pilot runs adjusting the step toward 50% acceptance, capped at max_step.
double tune_step(const ModelParams& p, double max_step = 2.0, std::uint64_t seed = 1);
// Same, evolving the caller's configuration (which doubles as warm-up).
double tune_step(Configuration& q, const ModelParams& p, double max_step, Rng& rng);

RunResult run(const ModelParams& p, const RunConfig& rc);

} // namespace qpsmc
