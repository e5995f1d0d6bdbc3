#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "gphl/dressing.hpp"
#include "gphl/lexpand.hpp"
#include "gphl/marginal.hpp"
#include "gphl/scattering.hpp"
#include "gphl/wavefunction.hpp"

namespace gphl {

// ---------------------------------------------------------------------------
// Pointwise layer: the dressing-product identities evaluated at explicit 3D
// configurations in free space, no grid involved.

// One k-particle configuration.
using Config3 = std::vector<Eigen::Vector3d>;

// Smooth positive pair profile with exact first and second derivatives.
struct PairProfile {
  std::function<double(const Eigen::Vector3d&)> value;
  std::function<Eigen::Vector3d(const Eigen::Vector3d&)> gradient;
  std::function<double(const Eigen::Vector3d&)> laplacian;
};

// g = 1 - w_N with derivatives from the scaled potential; the Laplacian comes
// from the zero-energy equation, exact for closed-form profiles.
PairProfile dressing_profile(const ScaledPotential& sp);

// g = 1 - 0.3 exp(-|x|^2) with analytic derivatives, for the pre-substitution
// identity that uses no scattering equation at all.
PairProfile generic_profile();

// Literal product-rule expansion of sum_l Delta_l prod_{i<j} g(x_i - x_j)
// against the grouped form G [sum Delta g/g + sum (grad g . grad g)/(g g)].
// Returns the max mismatch relative to the largest contributing term.
double leibniz_identity_residual(const PairProfile& g, int k,
                                 const std::vector<Config3>& configs);

// Applies H = -sum_l Delta_l + (1/N) sum_{i<j} V_N to the dressing product by
// the product rule (Laplacian of g via the zero-energy equation), compares
// against -2 G sum_{l; i<j, both != l} (grad_l g_li . grad_l g_lj)/(g_li g_lj),
// and folds in the generic-profile pre-substitution check at the same
// configurations. Returns the max relative residual.
double wave_operator_identity_residual(const ScaledPotential& sp, int k,
                                       const std::vector<Config3>& configs);

// Random configurations spanning the interaction range, resampled until every
// pair distance clears the potential's discontinuity radius by `margin`.
std::vector<Config3> sample_identity_configs(const ScaledPotential& sp, int k, int count,
                                             unsigned seed, double margin,
                                             int* resampled = nullptr);

// Zeroth-order multiplier at one configuration:
// -(grad_l g(x_l - x_i) . grad_l g(x_l - x_j)) / (g(x_l - x_i) g(x_l - x_j)).
double a_multiplier(const ScaledPotential& sp, const Eigen::Vector3d& xl,
                    const Eigen::Vector3d& xi, const Eigen::Vector3d& xj);

// Fixed-quadrature residual of the collapse conjugation split: the direct
// route (conjugate by the full (k+1)- and k-particle dressing products)
// against the screened-potential route (tilde term plus the localized term
// built from the expand_L monomials), on random smooth kernels, max over
// configurations and collapse indices l.
double collapse_split_residual(const ScaledPotential& sp, int k, int quad_per_axis,
                               int config_count, unsigned seed);

// ---------------------------------------------------------------------------
// Grid layer: operator realizations on periodic lattice kernels.

enum class CollapseVariant { plain, tilde, many };

// Pointwise multiplication of alpha by the zeroth-order multiplier in the
// unprimed variables; zero field when w vanishes.
DressedMarginal apply_A(const DressedMarginal& alpha, int i, int j, int l,
                        const ScaledPotential& sp);

// 2 (grad_l g_jl / g_jl) . grad_l alpha with the gradient of alpha taken
// spectrally along the unprimed axes of particle l.
DressedMarginal apply_E(const DressedMarginal& alpha, int j, int l, const ScaledPotential& sp);

// Contraction of an order-(k+1) kernel over the collapsed variable with the
// (N-k)/N prefactor: plain uses V_N on both sides of the commutator, tilde
// the screened V_N (1 - w_N), and many additionally multiplies by the
// localization factor (expand_L monomials; primed mirror on the primed side).
MarginalKernel apply_B_collapse(const MarginalKernel& alpha_kplus1, int l,
                                const ScaledPotential& sp, CollapseVariant variant);

// Centered-difference residual of the marginal hierarchy on a snapshot
// trajectory at uniform dt:
//   i d/dt gamma^(k) - [-Delta, gamma^(k)] - (1/N) sum_{i<j<=k} [V_N, gamma^(k)]
//   - (N-k)/N sum_{j<=k} Tr_{k+1}[V_N(x_j - x_{k+1}), gamma^(k+1)],
// Frobenius norm relative to the largest term, max over interior snapshots.
// The (k+1)-marginal contraction is taken directly from the wavefunction so
// only its collapsed diagonal is ever formed.
double bbgky_residual(const std::vector<WaveFunction>& snapshots, int k,
                      const ScaledPotential& sp);

struct EnergyTraces {
  double trace = 0.0;        // Tr prod_j S_j S_j' applied to the kernel
  double trace_extra = 0.0;  // same with an extra S_1 S_1'
};

// S_j = (1 - Delta_j)^{1/2} realized as the Fourier multiplier <xi> on the
// particle-j axes (primed S_j' on the primed axes).
EnergyTraces energy_functional(const MarginalKernel& gamma);
EnergyTraces energy_functional(const DressedMarginal& alpha);

}  // namespace gphl
