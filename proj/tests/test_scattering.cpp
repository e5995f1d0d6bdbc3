#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gphl/scattering.hpp"

using namespace gphl;

namespace {

// Independent oracle: Numerov shooting for u'' = f(r) u on a uniform grid,
// screened scattering length from the last two exterior samples, one
// Richardson step on top. Shares no code with the RK4 solver.
double numerov_screened_length(const RadialPotential& V, double s, int steps) {
  auto f = [&](double r) { return 0.5 * s * V(r); };
  auto once = [&](int n) {
    double h = V.r_max() / n;
    double um = 0.0, u0 = h + f(0.0) * h * h * h / 6.0;
    double rm = 0.0, r0 = h;
    auto c = [&](double r) { return 1.0 - h * h * f(r) / 12.0; };
    for (int i = 1; i < n; ++i) {
      double r1 = r0 + h;
      double u1 = (2.0 * u0 * (1.0 + 5.0 * h * h * f(r0) / 12.0) - um * c(rm)) / c(r1);
      um = u0;
      rm = r0;
      u0 = u1;
      r0 = r1;
    }
    double slope = (u0 - um) / h;
    return r0 - u0 / slope;
  };
  double coarse = once(steps), fine = once(2 * steps);
  return (16.0 * fine - coarse) / 15.0;
}

}  // namespace

TEST_CASE("square barrier matches the closed form") {
  auto V = RadialPotential::square_barrier(2.0, 1.0);
  auto sol = solve_zero_energy(V, 1.0, 1.0);
  double a_want = 1.0 - std::tanh(1.0);
  double w0_want = 1.0 - 1.0 / std::cosh(1.0);
  CHECK(sol.a0 == doctest::Approx(a_want).epsilon(1e-10));
  CHECK(sol.w0_at_origin == doctest::Approx(w0_want).epsilon(1e-10));
  CHECK(sol.residual < 1e-6);
  CHECK(sol.screening == 1.0);

  // Interior samples against u = sinh(kr)/(k cosh kR), kappa = 1.
  for (std::size_t i = 0; i < sol.r_grid.size(); i += 97) {
    double r = sol.r_grid[i];
    double want = r <= 1.0 ? std::sinh(r) / std::cosh(1.0) : r - a_want;
    CHECK(sol.u[i] == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("solution invariants hold") {
  auto V = RadialPotential::square_barrier(2.0, 1.0);
  auto sol = solve_zero_energy(V, 1.0, 1.0);
  for (std::size_t i = 0; i < sol.w0.size(); ++i) {
    CHECK(sol.w0[i] >= -1e-15);
    CHECK(sol.w0[i] < 1.0);
  }
  // Exterior: r w0 constant equal to a0.
  for (std::size_t i = 0; i < sol.r_grid.size(); ++i) {
    if (sol.r_grid[i] < 1.2) continue;
    CHECK(sol.r_grid[i] * sol.w0[i] == doctest::Approx(sol.a0).epsilon(1e-8));
  }
}

TEST_CASE("gaussian matches the numerov oracle") {
  auto V = RadialPotential::gaussian(1.0, 1.0);
  auto sol = solve_zero_energy(V, 1.0, 1.0);
  double want = numerov_screened_length(V, 1.0, 40000);
  CHECK(sol.a0 == doctest::Approx(want).epsilon(1e-8));

  // Screened version too.
  auto scr = solve_zero_energy(V, 16.0, 0.5);  // s = 0.25
  double want_s = numerov_screened_length(V, 0.25, 40000);
  CHECK(scr.tail_intercept == doctest::Approx(want_s).epsilon(1e-8));
  CHECK(scr.a0 == doctest::Approx(want_s / 0.25).epsilon(1e-8));
}

TEST_CASE("zero potential solves trivially") {
  auto V = RadialPotential::square_barrier(0.0, 1.0);
  auto sol = solve_zero_energy(V, 1.0, 1.0);
  CHECK(sol.a0 == 0.0);
  for (double w : sol.w0) CHECK(w == 0.0);
  CHECK(scattering_length(V) == 0.0);
  CHECK(coupling_constant(V, 0.5) == 0.0);
  CHECK(coupling_constant(V, 1.0) == 0.0);
}

TEST_CASE("scattering length examples") {
  auto V2 = RadialPotential::square_barrier(2.0, 1.0);
  CHECK(scattering_length(V2) == doctest::Approx(1.0 - std::tanh(1.0)).epsilon(1e-6));

  // Doubling the height strictly increases the length; closed form agrees.
  auto V4 = RadialPotential::square_barrier(4.0, 1.0);
  double a2 = scattering_length(V2), a4 = scattering_length(V4);
  CHECK(a4 > a2);
  double k4 = std::sqrt(2.0);
  CHECK(a4 == doctest::Approx(1.0 - std::tanh(k4) / k4).epsilon(1e-10));
}

TEST_CASE("coupling constant dichotomy") {
  auto V = RadialPotential::square_barrier(2.0, 1.0);
  CHECK(coupling_constant(V, 0.5) == doctest::Approx(8.0 * kPi / 3.0).epsilon(1e-12));
  CHECK(coupling_constant(V, 0.99) == doctest::Approx(8.0 * kPi / 3.0).epsilon(1e-12));
  CHECK(coupling_constant(V, 1.0) ==
        doctest::Approx(8.0 * kPi * (1.0 - std::tanh(1.0))).epsilon(1e-9));
  CHECK_THROWS_AS(coupling_constant(V, 0.0), DomainError);
  CHECK_THROWS_AS(coupling_constant(V, 1.2), DomainError);
}

TEST_CASE("born limit scan converges monotonically for beta < 1") {
  auto V = RadialPotential::square_barrier(2.0, 1.0);
  double b0 = V.integral_3d();
  auto rows = born_limit_scan(V, 0.5, {1e2, 1e4, 1e6});
  REQUIRE(rows.size() == 3);
  double prev_gap = 1e300;
  for (const auto& row : rows) {
    double gap = (b0 - row.value) / b0;
    CHECK(gap > 0.0);  // Born bound is strict for V not identically 0
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  // Closed form of the screened barrier: entry = 8 pi (1 - tanh(t)/t)/t^2, t = N^{-1/4}.
  for (const auto& row : rows) {
    double t = std::pow(row.N, -0.25);
    double want = 8.0 * kPi * (1.0 - std::tanh(t) / t) / (t * t);
    CHECK(row.value == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("born limit scan is exactly scale invariant at beta = 1") {
  auto V = RadialPotential::square_barrier(2.0, 1.0);
  auto rows = born_limit_scan(V, 1.0, {1e2, 1e4, 1e6});
  double want = 8.0 * kPi * (1.0 - std::tanh(1.0));
  for (const auto& row : rows) {
    CHECK(row.value == doctest::Approx(want).epsilon(1e-10));
    CHECK(row.value == rows[0].value);  // identical screened problem, identical bits
  }
}

TEST_CASE("randomized family satisfies the solver invariants") {
  std::mt19937 rng(20240817u);
  std::uniform_real_distribution<double> height(0.2, 5.0), radius(0.4, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    RadialPotential V = trial % 2 == 0
                            ? RadialPotential::square_barrier(height(rng), radius(rng))
                            : RadialPotential::gaussian(height(rng), 0.5 * radius(rng));
    auto sol = solve_zero_energy(V, 1.0, 1.0);
    CHECK(sol.residual < 1e-6);
    for (double w : sol.w0) {
      CHECK(w >= -1e-12);
      CHECK(w < 1.0);
    }
    // Born bound, strict for nonzero V.
    CHECK(8.0 * kPi * sol.a0 < V.integral_3d());
    CHECK(sol.a0 > 0.0);
    // Screening monotonicity of the screened length.
    auto weak = solve_zero_energy(V, 4.0, 0.5);  // s = 1/2
    CHECK(weak.tail_intercept < sol.tail_intercept);
    CHECK(weak.tail_intercept > 0.0);
  }
}

TEST_CASE("decay profile fits -1 and -2") {
  auto V = RadialPotential::square_barrier(2.0, 1.0, 12.0);
  auto sol = solve_zero_energy(V, 1.0, 1.0);
  auto prof = decay_profile(sol);
  CHECK(prof.p_w == doctest::Approx(-1.0).epsilon(0.01));
  CHECK(prof.p_grad == doctest::Approx(-2.0).epsilon(0.005));

  auto zero = solve_zero_energy(RadialPotential::square_barrier(0.0, 1.0), 1.0, 1.0);
  CHECK_THROWS_AS(decay_profile(zero), DomainError);
}

TEST_CASE("closed-form barrier helper is consistent") {
  BarrierScattering b(2.0, 1.0, 0.1);
  // Continuity at the barrier edge and at the origin series switch.
  CHECK(b.u(1.0 - 1e-12) == doctest::Approx(b.u(1.0 + 1e-12)).epsilon(1e-9));
  CHECK(b.du(1.0 - 1e-12) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(b.phi(1e-4 / b.kappa * 0.999) ==
        doctest::Approx(b.phi(1e-4 / b.kappa * 1.001)).epsilon(1e-10));
  CHECK(b.a0() == doctest::Approx((1.0 - std::tanh(b.kappa) / b.kappa) / 0.1).epsilon(1e-12));
  // dphi against a centered difference.
  for (double r : {0.2, 0.7, 1.5, 3.0}) {
    double fd = (b.phi(r + 1e-6) - b.phi(r - 1e-6)) / 2e-6;
    CHECK(b.dphi(r) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("scaled potential with closed-form dressing") {
  auto V = RadialPotential::square_barrier(2.0, 1.0);
  ScaledPotential sp(V, 100.0, 0.5);
  CHECK(sp.scale() == doctest::Approx(10.0));
  CHECK(sp.screening() == doctest::Approx(0.1));
  CHECK(sp.VN(0.0) == doctest::Approx(1000.0 * 2.0));
  CHECK(sp.VN(0.2) == 0.0);  // support shrinks to R / N^beta = 0.1
  double w_want = 1.0 - 1.0 / std::cosh(std::sqrt(0.1));
  CHECK(sp.wN(0.0) == doctest::Approx(w_want).epsilon(1e-12));
  CHECK(sp.integral_identity_gap() < 1e-8);

  // Pointwise ordering and the defining equation via finite differences:
  // Delta g = (g'' + 2 g'/r) should equal V_N g / (2N) away from the jump.
  for (double r : {0.02, 0.05, 0.08, 0.15, 0.3}) {
    CHECK(sp.VN_tilde(r) <= sp.VN(r));
    double h = 1e-5;
    double gm = sp.dressing(r - h), g0 = sp.dressing(r), gp = sp.dressing(r + h);
    if (std::abs(r - 0.1) < 2.0 * h) continue;
    double lap = (gp - 2.0 * g0 + gm) / (h * h) + (gp - gm) / (h * r);
    CHECK(lap == doctest::Approx(sp.dressing_laplacian(r)).epsilon(1e-4));
  }
}

TEST_CASE("scaled potential with numeric dressing") {
  auto V = RadialPotential::gaussian(1.0, 1.0);
  ScaledPotential sp(V, 16.0, 0.5, 3);
  CHECK(sp.integral_identity_gap() < 1e-8);
  // Continuity across the interpolation/tail boundary.
  double edge = V.support_radius() / sp.scale();
  CHECK(sp.wN(edge * 0.999) == doctest::Approx(sp.wN(edge * 1.001)).epsilon(1e-4));
  for (double r : {0.05, 0.2, 0.5, 1.0}) CHECK(sp.VN_tilde(r) <= sp.VN(r));
  // d = 1 surrogate scaling keeps the integral too.
  ScaledPotential sp1(V, 16.0, 0.5, 1);
  CHECK(sp1.integral_identity_gap() < 1e-8);
  CHECK(sp1.VN(0.0) == doctest::Approx(4.0));  // N^beta V(0)
}
