#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "gphl/wavefunction.hpp"

using namespace gphl;

namespace {

ScaledPotential zero_potential_1d() {
  return ScaledPotential(RadialPotential::square_barrier(0.0, 1.0), 4.0, 0.5, 1);
}

ScaledPotential gaussian_surrogate(double N, double beta) {
  return ScaledPotential(RadialPotential::gaussian(1.0, 0.8), N, beta, 1);
}

std::vector<cplx> normalized_random_field(const LatticeGrid& grid, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::size_t m = grid.total_points(grid.dimension());
  std::vector<cplx> phi(m);
  for (auto& v : phi) v = cplx(gauss(rng), gauss(rng));
  double s = 0.0;
  for (const auto& v : phi) s += std::norm(v);
  double scale = 1.0 / std::sqrt(s * grid.cell_volume());
  for (auto& v : phi) v *= scale;
  return phi;
}

}  // namespace

TEST_CASE("product state of the ground plane wave is constant") {
  LatticeGrid grid(1, 16, 4.0);
  std::vector<cplx> phi = plane_wave_field(grid, {0});
  WaveFunction psi = init_product_state(grid, phi, 2);
  CHECK(psi.N == 2);
  CHECK(psi.size() == 256);
  cplx first = psi.amp[0];
  for (const auto& v : psi.amp) CHECK(std::abs(v - first) < 1e-14);
  CHECK(std::abs(wavefunction_norm(psi) - 1.0) < 1e-12);
  CHECK(symmetry_defect(psi) < 1e-14);
  CHECK(psi.warnings.empty());
}

TEST_CASE("product state normalizes unnormalized input with a warning") {
  LatticeGrid grid(1, 16, 4.0);
  std::vector<cplx> phi = plane_wave_field(grid, {1});
  for (auto& v : phi) v *= 1.7;
  WaveFunction psi = init_product_state(grid, phi, 3);
  CHECK(std::abs(wavefunction_norm(psi) - 1.0) < 1e-12);
  REQUIRE(psi.warnings.size() == 1);
  CHECK(psi.warnings[0].find("normalized") != std::string::npos);
}

TEST_CASE("random smooth product state has unit norm and full symmetry") {
  LatticeGrid grid(1, 16, 5.0);
  std::vector<cplx> phi = normalized_random_field(grid, 11u);
  WaveFunction psi = init_product_state(grid, phi, 4);
  CHECK(std::abs(wavefunction_norm(psi) - 1.0) < 1e-12);
  CHECK(symmetry_defect(psi) < 1e-12);
}

TEST_CASE("particle index extraction matches row-major layout") {
  LatticeGrid grid(1, 8, 1.0);
  std::vector<cplx> phi = plane_wave_field(grid, {0});
  WaveFunction psi = init_product_state(grid, phi, 3);
  // flat = (i0 * 8 + i1) * 8 + i2
  std::size_t flat = (3u * 8u + 5u) * 8u + 7u;
  CHECK(psi.particle_index(flat, 0) == 3u);
  CHECK(psi.particle_index(flat, 1) == 5u);
  CHECK(psi.particle_index(flat, 2) == 7u);
}

TEST_CASE("oversized state is refused before allocation") {
  LatticeGrid grid(1, 16, 4.0);
  std::vector<cplx> phi = plane_wave_field(grid, {0});
  CHECK_THROWS_AS(init_product_state(grid, phi, 8), MemoryBudgetError);
}

TEST_CASE("free evolution applies the exact kinetic phase per mode") {
  LatticeGrid grid(1, 16, 2.0 * kPi);
  std::vector<cplx> phi = plane_wave_field(grid, {2});
  WaveFunction psi = init_product_state(grid, phi, 2);
  ScaledPotential sp = zero_potential_1d();
  double dt = 1e-2;
  int steps = 37;
  WaveFunction evolved = propagate(psi, sp, dt, steps);
  // Both particles sit in mode 2 of a 2 pi box: xi = 2, phase e^{-i 2|xi|^2 t}.
  double xi = grid.frequency(2);
  cplx expected_phase = std::polar(1.0, -2.0 * xi * xi * dt * steps);
  for (std::size_t f = 0; f < psi.size(); ++f)
    CHECK(std::abs(evolved.amp[f] - expected_phase * psi.amp[f]) < 1e-12);
  CHECK(evolved.time == doctest::Approx(dt * steps).epsilon(1e-12));
}

TEST_CASE("interacting propagation is unitary and symmetry preserving") {
  LatticeGrid grid(1, 16, 6.0);
  std::vector<cplx> phi = gaussian_packet_field(grid, 3.0, 0.9, 1);
  WaveFunction psi = init_product_state(grid, phi, 3);
  ScaledPotential sp = gaussian_surrogate(3.0, 0.4);
  WaveFunction evolved = propagate(psi, sp, 1e-3, 1000);
  CHECK(std::abs(wavefunction_norm(evolved) - 1.0) < 1e-10);
  CHECK(symmetry_defect(evolved) < 1e-10);
}

TEST_CASE("strang stepping self-converges at second order") {
  LatticeGrid grid(1, 16, 6.0);
  std::vector<cplx> phi = gaussian_packet_field(grid, 2.5, 0.8, 1);
  WaveFunction psi = init_product_state(grid, phi, 2);
  ScaledPotential sp = gaussian_surrogate(2.0, 0.4);
  double T = 0.128;
  auto err_against = [&](double dt, const WaveFunction& ref) {
    WaveFunction run = propagate(psi, sp, dt, static_cast<int>(std::lround(T / dt)));
    double e = 0.0;
    for (std::size_t f = 0; f < run.size(); ++f) e += std::norm(run.amp[f] - ref.amp[f]);
    return std::sqrt(e * 1.0);
  };
  WaveFunction ref = propagate(psi, sp, T / 512, 512);
  double e1 = err_against(T / 64, ref);
  double e2 = err_against(T / 128, ref);
  // dt and dt/2 against a dt/8 reference: ratio (1 - 1/64)/(1/4 - 1/64) = 4.2.
  CHECK(e1 / e2 > 3.4);
  CHECK(e1 / e2 < 5.0);
}

TEST_CASE("large time step records a stability warning but still runs") {
  LatticeGrid grid(1, 16, 2.0);
  std::vector<cplx> phi = plane_wave_field(grid, {0});
  WaveFunction psi = init_product_state(grid, phi, 2);
  ScaledPotential sp = zero_potential_1d();
  // Max kinetic eigenvalue is 2 * (pi n / L)^2; dt = 1 is far past 0.5.
  WaveFunction evolved = propagate(psi, sp, 1.0, 1);
  bool warned = false;
  for (const auto& w : evolved.warnings) warned |= w.find("exceeds 0.5") != std::string::npos;
  CHECK(warned);
  CHECK(std::abs(wavefunction_norm(evolved) - 1.0) < 1e-10);
}

TEST_CASE("pair table matches direct min-image evaluation") {
  LatticeGrid grid(1, 16, 4.0);
  ScaledPotential sp = gaussian_surrogate(4.0, 0.3);
  PairPotentialTable table(grid, sp);
  for (std::size_t ia : {0u, 3u, 9u, 15u})
    for (std::size_t ib : {0u, 5u, 12u}) {
      double delta = grid.min_image(grid.position(static_cast<int>(ia)) -
                                    grid.position(static_cast<int>(ib)));
      CHECK(table.pair_value(ia, ib) ==
            doctest::Approx(sp.VN(std::abs(delta))).epsilon(1e-13));
    }
}

TEST_CASE("config interaction energy sums over all pairs") {
  LatticeGrid grid(1, 8, 4.0);
  ScaledPotential sp = gaussian_surrogate(3.0, 0.3);
  PairPotentialTable table(grid, sp);
  std::vector<cplx> phi = plane_wave_field(grid, {0});
  WaveFunction psi = init_product_state(grid, phi, 3);
  // Configuration (1, 4, 6).
  std::size_t flat = (1u * 8u + 4u) * 8u + 6u;
  double direct = 0.0;
  int digits[3] = {1, 4, 6};
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      double delta = grid.min_image(grid.position(digits[a]) - grid.position(digits[b]));
      direct += sp.VN(std::abs(delta));
    }
  CHECK(table.at_config(psi, flat) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("gaussian packet field is normalized and boostable") {
  LatticeGrid grid(1, 32, 8.0);
  std::vector<cplx> packet = gaussian_packet_field(grid, 4.0, 1.0, 0);
  double s = 0.0;
  for (const auto& v : packet) s += std::norm(v);
  CHECK(std::abs(s * grid.cell_volume() - 1.0) < 1e-12);
  std::vector<cplx> boosted = gaussian_packet_field(grid, 4.0, 1.0, 2);
  // The boost multiplies by a pure phase: same modulus everywhere.
  for (std::size_t f = 0; f < packet.size(); ++f)
    CHECK(std::abs(std::abs(boosted[f]) - std::abs(packet[f])) < 1e-12);
}

TEST_CASE("propagation rejects zero or negative step counts gracefully") {
  LatticeGrid grid(1, 8, 2.0);
  std::vector<cplx> phi = plane_wave_field(grid, {0});
  WaveFunction psi = init_product_state(grid, phi, 2);
  ScaledPotential sp = zero_potential_1d();
  WaveFunction same = propagate(psi, sp, 1e-3, 0);
  CHECK(same.time == psi.time);
  for (std::size_t f = 0; f < psi.size(); ++f) CHECK(same.amp[f] == psi.amp[f]);
  CHECK_THROWS_AS(propagate(psi, sp, 1e-3, -1), DomainError);
}
