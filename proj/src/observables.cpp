#include "qpsmc/observables.hpp"

#include <algorithm>
#include <cmath>

#include "qpsmc/errors.hpp"

namespace qpsmc {

DensityHistogram::DensityHistogram(int n_bins, double q_max)
    : counts_(static_cast<std::size_t>(n_bins), 0.0), q_max_(q_max) {
  if (n_bins < 1) throw ParameterError("density histogram needs at least one bin");
  if (!(q_max > 0.0)) throw ParameterError("density histogram range must be positive");
}

int DensityHistogram::bin_index(double x) const {
  if (!(x >= -q_max_ && x < q_max_)) return -1;
  const int i = static_cast<int>((x + q_max_) / bin_width());
  return i < n_bins() ? i : n_bins() - 1;
}

void DensityHistogram::add(double x, double w) {
  const int i = bin_index(x);
  if (i < 0) {
    overflow_ += w;
  } else {
    counts_[i] += w;
  }
}

void DensityHistogram::scale(double f) {
  for (double& c : counts_) c *= f;
  overflow_ *= f;
  denominator_ *= f;
}

void DensityHistogram::clear() {
  std::fill(counts_.begin(), counts_.end(), 0.0);
  overflow_ = 0.0;
  denominator_ = 0.0;
}

std::vector<double> DensityHistogram::density() const {
  std::vector<double> rho(counts_.size(), 0.0);
  if (denominator_ == 0.0) return rho;
  const double f = 1.0 / (denominator_ * bin_width());
  for (std::size_t i = 0; i < counts_.size(); ++i) rho[i] = counts_[i] * f;
  return rho;
}

EnergyNumerators energy_terms(const Configuration& q, const IntegratedWeight& weight,
                              const ModelParams& p) {
  return {potential_total(q, p) * weight.value, weight.kinetic};
}

void accumulate_density(const Configuration& q, double w, DensityHistogram& hist) {
  for (double x : q.positions()) hist.add(x, w);
  hist.add_denominator(w);
}

} // namespace qpsmc
