#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gphl/common.hpp"
#include "gphl/grid.hpp"

namespace gphl {

// Discretized space-time density alpha(t, x_1..x_k, x_1'..x_k') on a periodic
// box, either as a dense row-major field [t][x][x'] or as a low-rank sum
// Sum_r c_r g_r(t, x) h_r(x') with the primed block time-independent.
// Times are uniform and ascending; both representations share the layout
// where x and x' each flatten k coordinates of d axes, last axis fastest.
struct SpaceTimeDensity {
  struct Term {
    cplx coef{1.0, 0.0};
    std::vector<cplx> active;   // [t][x_1..x_k], times.size() * n^(k d)
    std::vector<cplx> passive;  // [x_1'..x_k'], n^(k d)
  };

  int k = 1;
  LatticeGrid grid;
  std::vector<double> times;
  std::vector<cplx> field;  // dense representation; empty when low rank
  std::vector<Term> terms;  // low-rank representation; empty when dense
  std::vector<std::string> warnings;

  bool dense() const { return !field.empty(); }
  // Points in one k-particle block: n^(k d).
  std::size_t block_points() const { return grid.total_points(k * grid.dimension()); }
  double time_step() const { return times[1] - times[0]; }
};

// Rank bound for the low-rank representation.
inline constexpr int kMaxDensityRank = 8;

SpaceTimeDensity make_dense_density(int k, const LatticeGrid& grid, std::vector<double> times,
                                    std::vector<cplx> field);
SpaceTimeDensity make_low_rank_density(int k, const LatticeGrid& grid, std::vector<double> times,
                                       std::vector<SpaceTimeDensity::Term> terms);

// Pointwise value at (time index, unprimed flat, primed flat) in either
// representation.
cplx density_value(const SpaceTimeDensity& alpha, std::size_t t, std::size_t x, std::size_t xp);

// Dense copy of a low-rank density (budget-checked); dense input is returned
// unchanged.
SpaceTimeDensity expand_density(const SpaceTimeDensity& alpha);

// Discrete space-time L2 norm: quadrature weight dt * h^(2 k d) per sample.
double st_norm(const SpaceTimeDensity& alpha);

// Squared frequency magnitude |xi_c|^2 of one particle coordinate, read off a
// flat row-major index into a rank-`rank` tensor of grid axes; the coordinate
// occupies axes [axis0, axis0 + d).
double coordinate_frequency_sq(const LatticeGrid& grid, std::size_t flat, int rank, int axis0);

enum class LpMode { leq, annular };

// Sharp dyadic frequency cutoff on selected particle coordinates. Coordinates
// are numbered 0..k-1 for x_1..x_k and k..2k-1 for x_1'..x_k'; the cutoff
// tests the Euclidean magnitude of that coordinate's d-vector of frequencies.
// leq keeps |xi| <= M; annular keeps M/2 < |xi| <= M, except the base shell
// M = 1 which keeps |xi| <= 1.
struct DyadicProjector {
  double level = 1.0;
  LpMode mode = LpMode::leq;
  std::vector<int> coords;
};

SpaceTimeDensity lp_project(const SpaceTimeDensity& alpha, double M, LpMode mode,
                            const std::vector<int>& coords);
SpaceTimeDensity lp_project(const SpaceTimeDensity& alpha, const DyadicProjector& proj);

}  // namespace gphl
