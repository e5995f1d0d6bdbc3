#pragma once

#include <vector>

#include "gphl/marginal.hpp"
#include "gphl/scattering.hpp"

namespace gphl {

// Correlation-dressed kernel alpha^(k)(x;x') = gamma^(k)(x;x') / (G(x) G(x'))
// where G(x_1..x_k) = prod_{i<j} (1 - w_N(x_i - x_j)) with periodic min-image
// pair distances. The unprimed G field is stored alongside; the primed field
// is the same vector.
struct DressedMarginal {
  int k = 1;
  LatticeGrid grid;
  KernelMatrix alpha;
  Eigen::VectorXd dressing;

  std::size_t rows() const { return static_cast<std::size_t>(alpha.rows()); }
  double config_volume() const;
};

// w_N at every pair-difference flat index of the single-particle grid.
// Throws when any difference reaches 1 - w_N < 1e-6.
std::vector<double> pair_correlation_table(const LatticeGrid& grid, const ScaledPotential& sp);

// G over all k-particle configurations of the grid.
Eigen::VectorXd dressing_field(const LatticeGrid& grid, const ScaledPotential& sp, int k);

DressedMarginal dress(const MarginalKernel& gamma, const ScaledPotential& sp);
MarginalKernel undress(const DressedMarginal& alpha);

// Multiplier norm of the single-pair dressing correction: max over grid
// distances of |w_N / (1 - w_N)|, with the induced k-particle bound.
struct DressingGap {
  double gap = 0.0;
  double bound(int k) const;
};

DressingGap dressing_gap(const ScaledPotential& sp, const LatticeGrid& grid);

}  // namespace gphl
