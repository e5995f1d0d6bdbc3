#pragma once

#include <string>
#include <vector>

#include "gphl/common.hpp"
#include "gphl/grid.hpp"
#include "gphl/scattering.hpp"

namespace gphl {

// Cube of Fourier coefficients on modes |m_axis| <= half per axis (box length
// 2 pi, so modes are integer frequencies). get() is zero outside the cube.
struct ModeCube {
  int half = 0;
  int side = 1;
  std::vector<cplx> c;

  ModeCube() : c(1) {}
  explicit ModeCube(int half_width)
      : half(half_width), side(2 * half_width + 1),
        c(static_cast<std::size_t>(side) * side * side) {}
  bool inside(int mx, int my, int mz) const {
    return std::abs(mx) <= half && std::abs(my) <= half && std::abs(mz) <= half;
  }
  std::size_t index(int mx, int my, int mz) const {
    return (static_cast<std::size_t>(mx + half) * side + (my + half)) * side + (mz + half);
  }
  cplx get(int mx, int my, int mz) const {
    return inside(mx, my, mz) ? c[index(mx, my, mz)] : cplx(0.0, 0.0);
  }
  cplx& at(int mx, int my, int mz) { return c[index(mx, my, mz)]; }
};

// Squared-magnitude shell weight: hist[s] accumulates |coef|^2 over integer
// shells s = |m_1|^2 + ... + |m_k|^2, times the measure the caller folds in.

// Dispersive-weight norm of a separable density T(t) F(x_k) H(x_k'):
//   norm^2 = (dt / T) sum_tau |T_hat(tau)|^2
//            sum_{s,s'} <tau + s - s'>^{2b} active[s] passive[s']
// with active/passive shell histograms carrying their spatial measures and
// tau the discrete frequencies of the sampled window.
double xb_separable(const std::vector<cplx>& time_profile, double dt,
                    const std::vector<double>& active_hist,
                    const std::vector<double>& passive_hist, double b);

struct ProbeSample {
  double lhs = 0.0;
  double rhs = 0.0;
};

// One two-body member beta = T(t) V(x1 - x2) gamma(x1, x2) h(x1', x2') with
// gamma and h given as coefficient tensors on (modes of x1) x (modes of x2).
struct TwoBodyMember {
  std::vector<cplx> time_profile;
  double dt = 0.0;
  int half = 2;
  std::vector<cplx> active;   // (2 half + 1)^3 squared entries, (m1, m2) row-major
  std::vector<cplx> passive;  // same shape, (m1', m2')
  ModeCube potential;
};

// name: str_2body_L32 pairs ||V||_{L^{3/2}} with <grad_{x1}> gamma;
// str_2body_L65_shared pairs ||V||_{L^{6/5}} with <grad>^{3/4} on both.
ProbeSample two_body_sample(const TwoBodyMember& member, const std::string& name,
                            const LatticeGrid& grid);

// Three-body member beta = T(t) V(x1-x2) W(x2-x3) gamma(x_3) h(x_3') with
// gamma, h symmetrized products of per-coordinate cubes. The right side
// shares one derivative per coordinate against L^{3/2} potential norms.
struct ThreeBodyMember {
  std::vector<cplx> time_profile;
  double dt = 0.0;
  ModeCube g[3];
  ModeCube h[3];
  ModeCube potential_v;
  ModeCube potential_w;
};

ProbeSample three_body_sample(const ThreeBodyMember& member, const LatticeGrid& grid);

// Localized collapse member: f = |phi1 x phi2><phi1 x phi2|, left side
// ||R_{<=M} B-tilde U(t) f|| over the window, right side ||V-tilde||_{L^1}
// times the dyadic sum over M' >= M of (M/M')^{1-eps} ||R_{<=M'} f||.
struct CollapseSumMember {
  std::vector<cplx> phi1, phi2;  // n^3 position samples
  double level = 1.0;
  double window = 0.5;
  int time_samples = 16;
  double epsilon = 0.1;
};

ProbeSample collapse_sum_sample(const CollapseSumMember& member, const ScaledPotential& sp,
                                const LatticeGrid& grid);

struct ProbeReport {
  std::string name;
  int points_per_axis = 0;
  unsigned seed = 0;
  std::vector<double> ratios;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
};

inline constexpr unsigned kDefaultProbeSeed = 1732050808u;

const std::vector<std::string>& probe_names();

// Seeded band-limited ensemble for one named inequality; members are drawn in
// coefficient space, so refining points_per_axis re-evaluates the same
// continuum members on a finer grid.
ProbeReport probe_inequality(const std::string& name, int ensemble_size, int points_per_axis = 8,
                             unsigned seed = kDefaultProbeSeed);

struct EnvelopeReport {
  std::vector<double> N_values;
  std::vector<double> v_peak;               // max_r V_N(r) / N
  std::vector<double> grad_peak;            // max_r (w_N'(r))^2
  std::vector<double> v_envelope_ratio;     // peak against N^{3b-1} <N^b r>^{-100}
  std::vector<double> grad_envelope_ratio;  // peak against N^{4b-2} <N^b r>^{-2}
  double v_constant = 0.0;                  // sup over N and r of the first ratio
  double grad_constant = 0.0;               // sup over N and r of |w_N'| / (N^{2b-1} <N^b r>^{-2})
  double fitted_gap_exponent = 0.0;         // log2 slope of grad_peak / v_peak in N
};

// Radial scan of the interaction and dressing-gradient envelopes over
// N = 2^6 .. 2^20 at the scaled potential's beta.
EnvelopeReport potential_shape_compare(const ScaledPotential& sp);

}  // namespace gphl
