#pragma once

#include <functional>
#include <vector>

#include "gphl/common.hpp"
#include "gphl/potential.hpp"

namespace gphl {

// Zero-energy radial data for the screened problem (-Delta + s V / 2) phi = 0,
// phi -> 1, with screening s = N^{beta-1}. u = r phi is integrated as
// u'' = s V u / 2, u(0) = 0, and normalized so u -> r - tail_intercept.
// w0 = (1 - u/r)/s solves the inhomogeneous zero-energy equation, and
// r w0 -> a0 = tail_intercept / s outside the support of V.
struct ScatteringSolution {
  std::vector<double> r_grid;
  std::vector<double> u;
  std::vector<double> w0;
  double a0 = 0.0;
  double beta = 1.0;
  double N = 1.0;
  double screening = 1.0;
  double tail_intercept = 0.0;
  double residual = 0.0;
  double w0_at_origin = 0.0;
  double support_radius = 0.0;
};

ScatteringSolution solve_zero_energy(const RadialPotential& V, double N, double beta,
                                     double tol = 1e-6);

double scattering_length(const RadialPotential& V);

// beta < 1: integral of V over R^3; beta = 1: 8 pi * scattering length.
double coupling_constant(const RadialPotential& V, double beta);

struct BornScanRow {
  double N = 0.0;
  double beta = 0.0;
  double value = 0.0;
  double residual = 0.0;
};

// Entries 8 pi N^{1-beta} a(N^{beta-1} V) = 8 pi a0(N), approaching int V from
// below as N grows when beta < 1 and constant in N when beta = 1.
std::vector<BornScanRow> born_limit_scan(const RadialPotential& V, double beta,
                                         const std::vector<double>& N_list);

struct DecayProfile {
  double p_w = 0.0;
  double p_grad = 0.0;
};

// Log-log slopes of w0 and |w0'| on the exterior region; -1 and -2 for
// compactly supported potentials.
DecayProfile decay_profile(const ScatteringSolution& sol);

// Closed-form screened square-barrier solution: u = sinh(kr)/(k cosh kR)
// inside, u = r - a outside, k = sqrt(s V0 / 2), a = R - tanh(kR)/k.
struct BarrierScattering {
  double V0 = 0.0, R = 1.0, s = 1.0;
  double kappa = 0.0;
  double a = 0.0;

  BarrierScattering(double height, double radius, double screening);
  double u(double r) const;
  double du(double r) const;
  double phi(double r) const;   // u/r, continued through r = 0
  double dphi(double r) const;  // radial derivative of phi
  double w0(double r) const { return (1.0 - phi(r)) / s; }
  double a0() const { return a / s; }
};

// V_N(x) = N^{d beta} V(N^beta x) together with the matched dressing
// g = 1 - w_N, w_N(x) = N^{beta-1} w0(N^beta x). For square barriers the
// dressing is closed-form and satisfies Delta g = V_N g / (2N) identically;
// for other profiles it interpolates the numeric solve.
class ScaledPotential {
 public:
  ScaledPotential(RadialPotential base, double N, double beta, int dimension = 3);

  double VN(double r) const;
  double wN(double r) const;
  double VN_tilde(double r) const { return VN(r) * (1.0 - wN(r)); }
  double dressing(double r) const { return 1.0 - wN(r); }
  double dressing_radial_derivative(double r) const;
  double dressing_laplacian(double r) const { return 0.5 / N_ * VN(r) * dressing(r); }

  const RadialPotential& base() const { return base_; }
  double N() const { return N_; }
  double beta() const { return beta_; }
  int dimension() const { return d_; }
  double scale() const { return lambda_; }
  double screening() const { return screening_; }
  double a0() const;

  // Relative gap between quadrature of V_N and the unscaled integral.
  double integral_identity_gap() const;

 private:
  RadialPotential base_;
  double N_;
  double beta_;
  int d_;
  double lambda_;     // N^beta
  double screening_;  // N^{beta-1}
  bool closed_form_ = false;
  BarrierScattering barrier_{0.0, 1.0, 1.0};
  ScatteringSolution sol_;
};

}  // namespace gphl
