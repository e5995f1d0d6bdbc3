#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gphl/common.hpp"
#include "gphl/grid.hpp"
#include "gphl/wavefunction.hpp"

namespace gphl {

using KernelMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// k-particle density kernel gamma(x_k; x_k') over (grid^{dk})^2. The row-major
// matrix doubles as the flat 2k-particle-axis tensor: unprimed axes first.
struct MarginalKernel {
  int k = 1;
  LatticeGrid grid;
  KernelMatrix ker;

  std::size_t rows() const { return static_cast<std::size_t>(ker.rows()); }
  // Cell volume for one k-particle configuration, h^{dk}.
  double config_volume() const;
  double trace() const;
  double hermitian_defect() const;
  double min_eigenvalue() const;
};

MarginalKernel marginal(const WaveFunction& psi, int k);

// Tr over particle k+1: gamma^{(k+1)} -> order-k kernel.
MarginalKernel partial_trace(const MarginalKernel& gamma);

// (|phi><phi|)^{tensor k}.
MarginalKernel product_kernel(const LatticeGrid& grid, const std::vector<cplx>& phi, int k);

double hs_norm(const MarginalKernel& a);
double hs_distance(const MarginalKernel& a, const MarginalKernel& b);

// Distance of gamma^{(k)} to the k-fold pure product of phi.
double chaos_distance(const MarginalKernel& gamma, const std::vector<cplx>& phi);

// Truncated metric sum_{i=1}^{I} 2^{-i} |<J_i, gamma - gamma_tilde>| over a
// fixed-seed family of Hermitian kernels with unit Hilbert-Schmidt norm
// (hence operator norm <= 1). Truncation error <= 2^{-I} ||gamma-gamma_tilde||.
double dk_metric(const MarginalKernel& gamma, const MarginalKernel& gamma_tilde, int family_size,
                 unsigned seed = 414213562u);

}  // namespace gphl
