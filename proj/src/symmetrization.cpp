#include "qpsmc/symmetrization.hpp"

#include <cmath>
#include <numbers>

#include "qpsmc/errors.hpp"

namespace qpsmc {

double classical_dimer_weight(double separation, double lambda_th) {
  return std::exp(-2.0 * std::numbers::pi * separation * separation / (lambda_th * lambda_th));
}

std::vector<SymTerm> enumerate_terms(const Configuration& q, int sym_order, Statistics statistics,
                                     std::optional<double> dimer_cut, double lambda_th) {
  if (sym_order < 1 || sym_order > 3) {
    throw ParameterError("sym_order must be 1, 2 or 3");
  }
  if (dimer_cut && !(lambda_th > 0.0)) {
    throw ParameterError("dimer_cut needs a positive thermal wavelength");
  }
  std::vector<SymTerm> terms;
  terms.push_back(SymTerm{});
  if (sym_order == 1 || q.size() < 2) return terms;

  const int dimer_sign = statistics == Statistics::boson ? 1 : -1;
  std::vector<Dimer> dimers;
  dimers.reserve(q.size() - 1);
  for (std::size_t j = 0; j + 1 < q.size(); ++j) {
    const double sep = q[j] - q[j + 1];
    if (dimer_cut && classical_dimer_weight(sep, lambda_th) < *dimer_cut) continue;
    dimers.push_back({j, sep});
  }
  for (const Dimer& d : dimers) {
    SymTerm t;
    t.sign = dimer_sign;
    t.dimers[0] = d;
    t.n_dimers = 1;
    terms.push_back(t);
  }
  if (sym_order == 2) return terms;

  // (+-1)^2 = +1 for the double dimer group.
  for (std::size_t a = 0; a < dimers.size(); ++a) {
    for (std::size_t b = a + 1; b < dimers.size(); ++b) {
      if (dimers[b].left < dimers[a].left + 2) continue;
      SymTerm t;
      t.sign = 1;
      t.dimers = {dimers[a], dimers[b]};
      t.n_dimers = 2;
      terms.push_back(t);
    }
  }
  return terms;
}

} // namespace qpsmc
