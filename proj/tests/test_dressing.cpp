#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "gphl/dressing.hpp"
#include "gphl/wavefunction.hpp"

using namespace gphl;

namespace {

// Screened square barrier in closed form, used as the oracle for w_N on the
// grid: kappa = sqrt(s V0 / 2), u = sinh(kappa r)/(kappa cosh(kappa R)) inside,
// u = r - a outside, w_N(r) = 1 - u(lambda r)/(lambda r).
struct BarrierOracle {
  double V0, R, N, beta;
  double s() const { return std::pow(N, beta - 1.0); }
  double lambda() const { return std::pow(N, beta); }
  double kappa() const { return std::sqrt(s() * V0 / 2.0); }
  double a() const { return R - std::tanh(kappa() * R) / kappa(); }
  double wN(double r) const {
    double rho = lambda() * std::abs(r);
    double k = kappa();
    if (rho == 0.0) return 1.0 - 1.0 / std::cosh(k * R);
    if (rho <= R) return 1.0 - std::sinh(k * rho) / (rho * k * std::cosh(k * R));
    return (a() / rho);
  }
};

ScaledPotential barrier_potential(double N, double beta, int d) {
  return ScaledPotential(RadialPotential::square_barrier(2.0, 1.0), N, beta, d);
}

std::vector<cplx> smooth_field(const LatticeGrid& grid) {
  return gaussian_packet_field(grid, 0.45 * grid.box_length(), 0.2 * grid.box_length(), 1);
}

MarginalKernel interacting_pair_marginal(const LatticeGrid& grid) {
  WaveFunction psi = init_product_state(grid, smooth_field(grid), 3);
  ScaledPotential sp(RadialPotential::gaussian(1.0, 0.8), 3.0, 0.4, 1);
  psi = propagate(psi, sp, 2e-3, 40);
  return marginal(psi, 2);
}

}  // namespace

TEST_CASE("pair correlation table matches the closed barrier form") {
  LatticeGrid grid(1, 16, 6.0);
  ScaledPotential sp = barrier_potential(100.0, 0.5, 1);
  BarrierOracle oracle{2.0, 1.0, 100.0, 0.5};
  std::vector<double> w = pair_correlation_table(grid, sp);
  REQUIRE(w.size() == 16);
  for (int f = 0; f < 16; ++f) {
    double r = std::abs(grid.min_image(grid.position(f)));
    CHECK(w[static_cast<std::size_t>(f)] == doctest::Approx(oracle.wN(r)).epsilon(1e-12));
  }
  // Distance zero sits at index 0 and carries the largest value.
  for (std::size_t f = 1; f < 16; ++f) CHECK(w[0] > w[f]);
}

TEST_CASE("pair correlation table uses the euclidean min-image distance in d=3") {
  LatticeGrid grid(3, 8, 8.0);
  ScaledPotential sp = barrier_potential(50.0, 0.5, 3);
  std::vector<double> w = pair_correlation_table(grid, sp);
  REQUIRE(w.size() == 512);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int l = 0; l < 8; ++l) {
        double dx = grid.min_image(grid.position(i));
        double dy = grid.min_image(grid.position(j));
        double dz = grid.min_image(grid.position(l));
        double r = std::sqrt(dx * dx + dy * dy + dz * dz);
        CHECK(w[static_cast<std::size_t>((i * 8 + j) * 8 + l)] ==
              doctest::Approx(sp.wN(r)).epsilon(1e-12));
      }
}

TEST_CASE("pair correlation table rejects dimension mismatch and singular dressing") {
  LatticeGrid grid(1, 8, 6.0);
  CHECK_THROWS_AS(pair_correlation_table(grid, barrier_potential(100.0, 0.5, 3)), DomainError);
  // Strong barrier at beta = 1: 1 - w_N(0) = 1/cosh(15) ~ 6e-7 crosses the
  // singularity guard.
  ScaledPotential hard(RadialPotential::square_barrier(450.0, 1.0), 20.0, 1.0, 1);
  try {
    pair_correlation_table(grid, hard);
    FAIL("expected a singular dressing error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("dressing singular") != std::string::npos);
  }
}

TEST_CASE("dressing field is all ones at order one and a pair product at order two") {
  LatticeGrid grid(1, 16, 6.0);
  ScaledPotential sp = barrier_potential(100.0, 0.5, 1);
  Eigen::VectorXd g1 = dressing_field(grid, sp, 1);
  for (Eigen::Index i = 0; i < g1.size(); ++i) CHECK(g1[i] == 1.0);

  std::vector<double> w = pair_correlation_table(grid, sp);
  Eigen::VectorXd g2 = dressing_field(grid, sp, 2);
  REQUIRE(g2.size() == 256);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      double expect = 1.0 - w[static_cast<std::size_t>((i - j + 16) % 16)];
      CHECK(g2[i * 16 + j] == doctest::Approx(expect).epsilon(1e-14));
      CHECK(g2[i * 16 + j] == doctest::Approx(g2[j * 16 + i]).epsilon(1e-14));
    }
}

TEST_CASE("dressing field at order three multiplies all three pair factors") {
  LatticeGrid grid(1, 8, 6.0);
  ScaledPotential sp = barrier_potential(100.0, 0.5, 1);
  std::vector<double> w = pair_correlation_table(grid, sp);
  Eigen::VectorXd g3 = dressing_field(grid, sp, 3);
  REQUIRE(g3.size() == 512);
  auto pair = [&](int i, int j) { return 1.0 - w[static_cast<std::size_t>((i - j + 8) % 8)]; };
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int l = 0; l < 8; ++l) {
        double expect = pair(i, j) * pair(i, l) * pair(j, l);
        CHECK(g3[(i * 8 + j) * 8 + l] == doctest::Approx(expect).epsilon(1e-13));
      }
}

TEST_CASE("dress and undress invert each other") {
  LatticeGrid grid(1, 16, 6.0);
  MarginalKernel gamma = interacting_pair_marginal(grid);
  ScaledPotential sp = barrier_potential(100.0, 0.5, 1);
  DressedMarginal alpha = dress(gamma, sp);
  CHECK(alpha.k == 2);
  CHECK(alpha.rows() == gamma.rows());
  MarginalKernel back = undress(alpha);
  CHECK(hs_distance(back, gamma) < 1e-12);
  // The dressing actually moved the kernel.
  MarginalKernel as_kernel = gamma;
  as_kernel.ker = alpha.alpha;
  CHECK(hs_distance(as_kernel, gamma) > 1e-4);
}

TEST_CASE("dressed kernel stays within the multiplier gap bound") {
  LatticeGrid grid(1, 16, 6.0);
  MarginalKernel gamma = interacting_pair_marginal(grid);
  ScaledPotential sp = barrier_potential(100.0, 0.5, 1);
  DressedMarginal alpha = dress(gamma, sp);
  MarginalKernel diff = gamma;
  diff.ker = alpha.alpha - gamma.ker;
  double rel = hs_norm(diff) / hs_norm(gamma);
  DressingGap gap = dressing_gap(sp, grid);
  CHECK(rel <= gap.bound(2) + 1e-12);
  CHECK(rel > 1e-4);
}

TEST_CASE("dressing gap carries the closed-form value and bound") {
  LatticeGrid grid(1, 16, 6.0);
  ScaledPotential sp = barrier_potential(100.0, 0.5, 1);
  DressingGap gap = dressing_gap(sp, grid);
  // max w/(1-w) sits at r=0 where 1-w = 1/cosh(kappa R): gap = cosh(kappa)-1.
  double kappa = std::sqrt(0.1 * 2.0 / 2.0);
  CHECK(gap.gap == doctest::Approx(std::cosh(kappa) - 1.0).epsilon(1e-12));
  CHECK(gap.bound(2) == doctest::Approx(std::pow(1.0 + gap.gap, 2.0) - 1.0).epsilon(1e-12));
  CHECK(gap.bound(1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(gap.bound(3) > gap.bound(2));
}
