#pragma once

#include <vector>

#include "gphl/common.hpp"
#include "gphl/density.hpp"

namespace gphl {

// C-infinity window profile on [0, 1]: identically 1 on the central half,
// smoothly 0 at both ends (exponential bump transition).
double time_cutoff(double s);

// Multiplies each time slice by time_cutoff of the window-relative time.
SpaceTimeDensity apply_time_cutoff(const SpaceTimeDensity& alpha);

// Space-time norm with dispersive weight <tau + |xi|^2 - |xi'|^2>^(2b) on the
// discrete transform; b = 0 reduces to the space-time L2 norm. Low-rank input
// is expanded; the time sample count must be a power of two.
double xb_norm(const SpaceTimeDensity& alpha, double b);

enum class Shear { T1, T2, T12, T13, T23 };

// Exact periodic coordinate reindexings on the unprimed block:
//   T1  (k>=2): (x1, x2)     -> (x1 + x2, x2)
//   T2  (k>=2): (x1, x2)     -> (x1, x2 + x1)
//   T12 (k>=3): (x1, x2, x3) -> (x1 + x3, x2 + x3, x3)
//   T23 (k>=3): (x1, x2, x3) -> (x1, x2 + x1, x3 + x1)
//   T13 (k>=3): (x1, x2, x3) -> (x1 + x2, x2, x3 + x2)
// shear(alpha)(y) = alpha(map(y)); shear_inverse applies the inverse map.
SpaceTimeDensity shear(const SpaceTimeDensity& alpha, Shear which);
SpaceTimeDensity shear_inverse(const SpaceTimeDensity& alpha, Shear which);

enum class CollapseSide { plus, minus, commutator };

struct CollapseResult {
  SpaceTimeDensity field;
  double l1t_l2_norm = 0.0;
};

// Contraction of the (k+1)-st particle onto x_j (plus side), onto x_j'
// (minus side), or their difference (the commutator realized as a pair of
// grid-diagonal restrictions), followed by the |xi_i| |xi_i'| derivative
// multipliers on every surviving coordinate. The adjoint of the plus side is
// the minus side, so the commutator of a hermitian kernel is anti-hermitian.
CollapseResult collapsing_apply(const SpaceTimeDensity& gamma_kplus1, int j,
                                CollapseSide side = CollapseSide::commutator);

}  // namespace gphl
