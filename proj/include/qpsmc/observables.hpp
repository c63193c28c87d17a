#pragma once

#include <cstddef>
#include <vector>

#include "qpsmc/model.hpp"
#include "qpsmc/quadrature.hpp"

namespace qpsmc {

// Weighted position histogram over [-q_max, q_max]; positions outside land in
// the overflow tally.
class DensityHistogram {
public:
  DensityHistogram() = default;
  DensityHistogram(int n_bins, double q_max);

  int n_bins() const { return static_cast<int>(counts_.size()); }
  double q_max() const { return q_max_; }
  double bin_width() const { return 2.0 * q_max_ / counts_.size(); }
  double bin_center(int i) const { return -q_max_ + (i + 0.5) * bin_width(); }
  // -1 for positions outside the range.
  int bin_index(double x) const;

  const std::vector<double>& counts() const { return counts_; }
  double overflow() const { return overflow_; }
  double denominator() const { return denominator_; }

  void add(double x, double w);
  void add_denominator(double w) { denominator_ += w; }
  void scale(double f);
  void clear();

  // rho(q) = (counts / denominator) / bin width; integrates to N.
  std::vector<double> density() const;

private:
  std::vector<double> counts_;
  double q_max_ = 4.0;
  double overflow_ = 0.0;
  double denominator_ = 0.0;
};

// Position observable U(q) * w and the kinetic numerator from the quadrature
// companion, both in the weight's relative scale (multiply by
// exp(weight.log_scale) for absolute values).
struct EnergyNumerators {
  double potential = 0.0;
  double kinetic = 0.0;
  double total() const { return potential + kinetic; }
};
EnergyNumerators energy_terms(const Configuration& q, const IntegratedWeight& weight,
                              const ModelParams& p);

// Adds `w` to the bin of every particle and to the shared denominator.
void accumulate_density(const Configuration& q, double w, DensityHistogram& hist);

} // namespace qpsmc
