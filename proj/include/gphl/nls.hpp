#pragma once

#include <vector>

#include "gphl/common.hpp"
#include "gphl/grid.hpp"

namespace gphl {

// Single-particle field on the periodic box evolving under the cubic
// equation i d_t phi = -Delta phi + coupling |phi|^2 phi.
struct NLSField {
  LatticeGrid grid;
  std::vector<cplx> phi;
  double coupling = 0.0;
  double time = 0.0;
};

NLSField make_nls_field(const LatticeGrid& grid, const std::vector<cplx>& phi, double coupling);

// Discrete L^2 mass ||phi||^2 and energy int |grad phi|^2 + (c/2)|phi|^4.
double nls_mass(const NLSField& f);
double nls_energy(const NLSField& f);

// Strang split-step: half kinetic Fourier multiplier, exact pointwise
// nonlinear phase e^{-i c |phi|^2 dt}, half kinetic. Negative dt reverses
// time.
NLSField nls_propagate(const NLSField& f, double dt, int steps);

// Uniformly spaced snapshots of one propagation, initial state included.
struct NLSTrajectory {
  std::vector<NLSField> snapshots;
};

NLSTrajectory nls_trajectory(const NLSField& f, double dt, int steps, int snapshot_every);

// sup over snapshots of ||<grad> phi||_{L^2}, multiplier sqrt(1 + |xi|^2).
double esy_functional(const NLSTrajectory& traj);

// Trapezoid-in-time integral of |||grad|(|phi|^2 phi)||_{L^2}, the gradient
// magnitude realized as the Fourier multiplier |xi|.
double km_functional(const NLSTrajectory& traj);

}  // namespace gphl
