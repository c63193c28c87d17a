#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "qpsmc/model.hpp"

namespace qpsmc {

// Transposition of neighbours (left, left+1). The factor it contributes is
// exp(i q_{left,left+1} (p_left - p_{left+1}) / hbar).
struct Dimer {
  std::size_t left = 0;
  double separation = 0.0; // q_left - q_{left+1}, negative for sorted positions
};

// One term of the truncated loop expansion: monomer (no dimers), a single
// nearest-neighbour dimer, or two non-overlapping ones.
struct SymTerm {
  int sign = 1;
  std::array<Dimer, 2> dimers{};
  std::size_t n_dimers = 0;

  std::span<const Dimer> loops() const { return {dimers.data(), n_dimers}; }
};

// Terms of the order-a symmetrization function, monomer first, then dimers
// ordered by left index, then double dimers ordered by (j, k).
std::vector<SymTerm> enumerate_terms(const Configuration& q, int sym_order,
                                     Statistics statistics,
                                     std::optional<double> dimer_cut = std::nullopt,
                                     double lambda_th = 0.0);

// Momentum-integrated dimer factor with W = 1: exp(-2 pi q^2 / Lambda^2).
double classical_dimer_weight(double separation, double lambda_th);

} // namespace qpsmc
