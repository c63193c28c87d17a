#include "qpsmc/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qpsmc/errors.hpp"
#include "qpsmc/meanfield.hpp"
#include "qpsmc/quadrature.hpp"
#include "qpsmc/symmetrization.hpp"

namespace qpsmc {

void validate(const RunConfig& rc) {
  if (rc.n_blocks < 2) throw ParameterError("n_blocks must be >= 2");
  if (rc.eval_stride < 1) throw ParameterError("eval_stride must be >= 1");
  if (rc.cycles_per_block < rc.eval_stride) {
    throw ParameterError("cycles_per_block must be >= eval_stride");
  }
  if (!(rc.max_step > 0.0)) throw ParameterError("max_step must be positive");
  if (rc.equilibration_cycles && *rc.equilibration_cycles < 0) {
    throw ParameterError("equilibration_cycles must be >= 0");
  }
  if (rc.density_bins < 1) throw ParameterError("density_bins must be >= 1");
  if (!(rc.density_range > 0.0)) throw ParameterError("density_range must be positive");
}

BlockAccumulator::BlockAccumulator(int n_blocks, int n_observables)
    : n_obs_(n_observables), den_(n_blocks, 0.0),
      num_(static_cast<std::size_t>(n_blocks) * n_observables, 0.0), count_(n_blocks, 0) {}

void BlockAccumulator::add(int block, double w, std::span<const double> numerators) {
  den_[block] += w;
  double* row = num_.data() + static_cast<std::size_t>(block) * n_obs_;
  for (int i = 0; i < n_obs_; ++i) row[i] += numerators[i];
  ++count_[block];
}

void BlockAccumulator::rescale(double f) {
  for (double& d : den_) d *= f;
  for (double& x : num_) x *= f;
}

namespace {

Estimate mean_and_error(const std::vector<double>& xs, double centre) {
  const double n = static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - centre) * (x - centre);
  return {centre, std::sqrt(ss / (n - 1.0) / n)};
}

} // namespace

Estimate BlockAccumulator::ratio(int obs) const {
  double num_total = 0.0, den_total = 0.0;
  std::vector<double> ratios;
  ratios.reserve(den_.size());
  for (std::size_t b = 0; b < den_.size(); ++b) {
    const double num = num_[b * n_obs_ + obs];
    num_total += num;
    den_total += den_[b];
    ratios.push_back(num / den_[b]);
  }
  return mean_and_error(ratios, num_total / den_total);
}

std::vector<double> BlockAccumulator::block_ratios(int obs) const {
  std::vector<double> out(den_.size());
  for (std::size_t b = 0; b < den_.size(); ++b) out[b] = num_[b * n_obs_ + obs] / den_[b];
  return out;
}

Estimate BlockAccumulator::mean_weight() const {
  double total = 0.0;
  long n = 0;
  std::vector<double> means;
  for (std::size_t b = 0; b < den_.size(); ++b) {
    total += den_[b];
    n += count_[b];
    means.push_back(den_[b] / static_cast<double>(count_[b]));
  }
  return mean_and_error(means, total / static_cast<double>(n));
}

int metropolis_cycle(Configuration& q, const ModelParams& p, double step, Rng& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int accepted = 0;
  const std::size_t n = q.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double x_old = q[j];
    const double x_new = x_old + step * uni(rng);
    const double u_new = pair_field(q, j, x_new, p).u;
    const double r = unit(rng);
    if (!std::isfinite(u_new)) continue;
    const double du = trap_energy(x_new, p) - trap_energy(x_old, p) + u_new -
                      pair_field(q, j, x_old, p).u;
    if (du <= 0.0 || r < std::exp(-p.beta * du)) {
      q.move(j, x_new);
      ++accepted;
    }
  }
  return accepted;
}

Configuration initial_configuration(const ModelParams& p) {
  std::vector<double> x(p.n_particles);
  for (int j = 0; j < p.n_particles; ++j) x[j] = j - 0.5 * (p.n_particles - 1);
  return Configuration(std::move(x));
}

double tune_step(Configuration& q, const ModelParams& p, double max_step, Rng& rng) {
  constexpr int kRounds = 30;
  constexpr int kCycles = 200;
  double step = std::min(max_step, 0.5);
  for (int round = 0; round < kRounds; ++round) {
    long acc = 0;
    for (int c = 0; c < kCycles; ++c) acc += metropolis_cycle(q, p, step, rng);
    const double rate = static_cast<double>(acc) / (kCycles * static_cast<double>(q.size()));
    step *= std::clamp(rate / 0.5, 0.5, 2.0);
    step = std::min(step, max_step);
  }
  return step;
}

double tune_step(const ModelParams& p, double max_step, std::uint64_t seed) {
  Configuration q = initial_configuration(p);
  Rng rng(seed);
  return tune_step(q, p, max_step, rng);
}

namespace {

// Observable slots in the block accumulator.
enum Slot : int { kPotential = 0, kKinetic = 1, kEnergy = 2, kMonomer = 3, kFirstBin = 4 };

} // namespace

RunResult run(const ModelParams& p, const RunConfig& rc) {
  validate(rc);
  if (static_cast<int>(p.n_particles) < 1) throw ParameterError("n_particles must be >= 1");

  Configuration q = rc.initial_positions ? Configuration(*rc.initial_positions)
                                         : initial_configuration(p);
  if (static_cast<int>(q.size()) != p.n_particles) {
    throw ParameterError("initial_positions must hold n_particles entries");
  }
  Rng rng(rc.seed);

  RunResult res;
  res.seed = rc.seed;
  res.step_size = rc.step_size > 0.0 ? std::min(rc.step_size, rc.max_step)
                                     : tune_step(q, p, rc.max_step, rng);

  const long total_cycles = static_cast<long>(rc.n_blocks) * rc.cycles_per_block;
  const long equilibration = rc.equilibration_cycles.value_or(total_cycles / 10);
  for (long c = 0; c < equilibration; ++c) metropolis_cycle(q, p, res.step_size, rng);

  DensityHistogram hist(rc.density_bins, rc.density_range);
  const int n_bins = hist.n_bins();
  BlockAccumulator acc(rc.n_blocks, kFirstBin + n_bins);
  std::vector<double> numerators(kFirstBin + n_bins, 0.0);

  std::vector<LocalMode> modes(q.size());
  std::optional<double> log_ref;
  long accepted = 0;
  long inactive = 0;
  double overflow = 0.0, density_den = 0.0;
  double max_residual = 0.0;

  for (int block = 0; block < rc.n_blocks; ++block) {
    for (long c = 1; c <= rc.cycles_per_block; ++c) {
      accepted += metropolis_cycle(q, p, res.step_size, rng);
      if (c % rc.eval_stride != 0) continue;

      if (p.commutation) {
        modes = locate_minima(q, p);
      } else {
        std::fill(modes.begin(), modes.end(), LocalMode{});
      }
      for (const LocalMode& m : modes) inactive += (p.commutation && m.active) ? 0 : 1;
      const auto terms = enumerate_terms(q, p.sym_order, p.statistics, p.dimer_cut, p.lambda_th);
      IntegratedWeight w = integrated_weight(q, modes, terms, p);
      w.log_scale += rc.log_weight_offset;
      max_residual = std::max(max_residual, w.imag_residual);

      if (!log_ref) log_ref = w.log_scale;
      if (w.log_scale - *log_ref > 300.0) {
        const double f = std::exp(*log_ref - w.log_scale);
        acc.rescale(f);
        overflow *= f;
        density_den *= f;
        log_ref = w.log_scale;
      }
      const double f = std::exp(w.log_scale - *log_ref);
      const double weight = f * w.value;
      const EnergyNumerators e = energy_terms(q, w, p);

      std::fill(numerators.begin(), numerators.end(), 0.0);
      numerators[kPotential] = f * e.potential;
      numerators[kKinetic] = f * e.kinetic;
      numerators[kEnergy] = f * e.total();
      numerators[kMonomer] = f * w.monomer;
      for (double x : q.positions()) {
        const int i = hist.bin_index(x);
        if (i < 0) {
          overflow += std::abs(weight);
        } else {
          numerators[kFirstBin + i] += weight;
        }
      }
      density_den += std::abs(weight) * static_cast<double>(q.size());
      acc.add(block, weight, numerators);
    }
  }

  res.potential = acc.ratio(kPotential);
  res.kinetic = acc.ratio(kKinetic);
  res.energy = acc.ratio(kEnergy);
  const double scale = p.beta / p.n_particles;
  res.beta_kinetic_per_particle = {res.kinetic.mean * scale, res.kinetic.sigma * scale};

  res.block_energy = acc.block_ratios(kEnergy);
  res.block_weight = acc.block_weights();
  {
    // Reciprocal of the monomer share, with the error of the share propagated.
    const Estimate share = acc.ratio(kMonomer);
    res.exchange_factor = {1.0 / share.mean, share.sigma / (share.mean * share.mean)};
  }
  const Estimate mw = acc.mean_weight();
  const double absolute = std::exp(log_ref.value_or(0.0) - rc.log_weight_offset);
  res.denominator = {mw.mean * absolute, mw.sigma * absolute};
  res.pole_warning = std::abs(mw.mean) < 2.0 * mw.sigma;
  if (res.pole_warning) res.flags.push_back("pole");

  res.bin_centers.resize(n_bins);
  res.density.resize(n_bins);
  const double width = hist.bin_width();
  for (int i = 0; i < n_bins; ++i) {
    res.bin_centers[i] = hist.bin_center(i);
    const Estimate r = acc.ratio(kFirstBin + i);
    res.density[i] = {r.mean / width, r.sigma / width};
  }
  res.overflow_fraction = density_den > 0.0 ? overflow / density_den : 0.0;

  long samples = 0;
  for (int b = 0; b < rc.n_blocks; ++b) samples += acc.count(b);
  res.samples = samples;
  res.acceptance = static_cast<double>(accepted) /
                   (static_cast<double>(total_cycles) * static_cast<double>(q.size()));
  res.inactive_fraction =
      static_cast<double>(inactive) / (static_cast<double>(samples) * static_cast<double>(q.size()));
  res.max_imag_residual = max_residual;
  if (max_residual > 1e-10) res.flags.push_back("imaginary-residual");
  return res;
}

} // namespace qpsmc
