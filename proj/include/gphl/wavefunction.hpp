#pragma once

#include <string>
#include <vector>

#include "gphl/common.hpp"
#include "gphl/grid.hpp"
#include "gphl/scattering.hpp"

namespace gphl {

// Bosonic N-body state on grid^(d N), flat row-major, particle-then-axis
// order: particle 0's axes are outermost.
struct WaveFunction {
  int N = 1;
  LatticeGrid grid;
  std::vector<cplx> amp;
  double time = 0.0;
  std::vector<std::string> warnings;

  int axes() const { return N * grid.dimension(); }
  std::size_t size() const { return amp.size(); }
  // Flat index of one particle's d coordinates inside a full flat index.
  std::size_t particle_index(std::size_t flat, int particle) const;
};

double wavefunction_norm(const WaveFunction& psi);

// max |psi(swap_ij x) - psi(x)| over all transpositions, relative to max |psi|.
double symmetry_defect(const WaveFunction& psi);

WaveFunction init_product_state(const LatticeGrid& grid, const std::vector<cplx>& phi, int N);

// Single-particle helpers for building product data.
std::vector<cplx> plane_wave_field(const LatticeGrid& grid, const std::vector<int>& mode);
std::vector<cplx> gaussian_packet_field(const LatticeGrid& grid, double center, double width,
                                        int boost_mode = 0);

// Strang split-step under H = -sum Delta_j + (1/N) sum_{i<j} V_N(x_i - x_j).
// Kinetic sub-steps are Fourier multipliers; the interaction phase is
// precomputed once (time-independent potential).
WaveFunction propagate(const WaveFunction& psi, const ScaledPotential& sp, double dt, int steps);

// Pairwise interaction energy sum_{i<j} V_N at one configuration index,
// using the same periodic pair table as propagate.
class PairPotentialTable {
 public:
  PairPotentialTable(const LatticeGrid& grid, const ScaledPotential& sp);
  // Potential value for the pair of single-particle flat indices (ia, ib).
  double pair_value(std::size_t ia, std::size_t ib) const;
  double at_config(const WaveFunction& psi, std::size_t flat) const;

 private:
  int d_;
  int n_;
  std::vector<double> table_;
};

}  // namespace gphl
