#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "gphl/density.hpp"
#include "gphl/fft.hpp"

using namespace gphl;

namespace {

std::vector<double> uniform_times(int count, double t0, double dt) {
  std::vector<double> times(count);
  for (int i = 0; i < count; ++i) times[i] = t0 + dt * i;
  return times;
}

std::vector<cplx> random_field(std::size_t size, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<cplx> out(size);
  for (auto& v : out) v = cplx(gauss(rng), gauss(rng));
  return out;
}

SpaceTimeDensity random_dense(int k, const LatticeGrid& grid, int time_count, unsigned seed) {
  const std::size_t block = grid.total_points(k * grid.dimension());
  return make_dense_density(k, grid, uniform_times(time_count, 0.0, 0.125),
                            random_field(time_count * block * block, seed));
}

SpaceTimeDensity random_low_rank(int k, const LatticeGrid& grid, int time_count, int rank,
                                 unsigned seed) {
  const std::size_t block = grid.total_points(k * grid.dimension());
  std::vector<SpaceTimeDensity::Term> terms(rank);
  for (int r = 0; r < rank; ++r) {
    terms[r].coef = cplx(0.3 + 0.2 * r, 0.1 * r - 0.2);
    terms[r].active = random_field(time_count * block, seed + 17u * r);
    terms[r].passive = random_field(block, seed + 17u * r + 5u);
  }
  return make_low_rank_density(k, grid, uniform_times(time_count, 0.0, 0.125), terms);
}

double max_field_diff(const SpaceTimeDensity& a, const SpaceTimeDensity& b) {
  REQUIRE(a.field.size() == b.field.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.field.size(); ++i)
    worst = std::max(worst, std::abs(a.field[i] - b.field[i]));
  return worst;
}

}  // namespace

TEST_CASE("low-rank evaluation agrees with its dense expansion") {
  LatticeGrid grid(1, 16, 2.0 * kPi);
  SpaceTimeDensity low = random_low_rank(1, grid, 4, 3, 901u);
  SpaceTimeDensity dense = expand_density(low);
  REQUIRE(dense.dense());
  const std::size_t block = low.block_points();
  double worst = 0.0;
  for (std::size_t t = 0; t < low.times.size(); ++t)
    for (std::size_t x = 0; x < block; ++x)
      for (std::size_t xp = 0; xp < block; ++xp)
        worst = std::max(worst,
                         std::abs(density_value(low, t, x, xp) - density_value(dense, t, x, xp)));
  CHECK(worst < 1e-12);
  CHECK(st_norm(low) == doctest::Approx(st_norm(dense)).epsilon(1e-12));
}

TEST_CASE("space-time norm matches a direct quadrature sum") {
  LatticeGrid grid(1, 8, 4.0);
  SpaceTimeDensity alpha = random_dense(1, grid, 2, 11u);
  double sum = 0.0;
  for (const cplx& v : alpha.field) sum += std::norm(v);
  const double cell = grid.cell_volume();
  const double want = std::sqrt(sum * 0.125 * cell * cell);
  CHECK(st_norm(alpha) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("leq projection is idempotent") {
  LatticeGrid grid(1, 16, 2.0 * kPi);
  SpaceTimeDensity alpha = random_dense(1, grid, 2, 23u);
  SpaceTimeDensity once = lp_project(alpha, 2.0, LpMode::leq, {0, 1});
  SpaceTimeDensity twice = lp_project(once, 2.0, LpMode::leq, {0, 1});
  CHECK(max_field_diff(once, twice) < 1e-14 * 16.0);

  SpaceTimeDensity shell = lp_project(alpha, 4.0, LpMode::annular, {0});
  SpaceTimeDensity shell_twice = lp_project(shell, 4.0, LpMode::annular, {0});
  CHECK(max_field_diff(shell, shell_twice) < 1e-14 * 16.0);
}

TEST_CASE("plane wave above the cutoff is annihilated, below survives") {
  LatticeGrid grid(1, 16, 2.0 * kPi);
  const int n = grid.points_per_axis();
  const std::size_t block = grid.total_points(1);
  std::vector<double> times = uniform_times(2, 0.0, 0.5);
  auto mode_field = [&](int m) {
    std::vector<cplx> field(times.size() * block * block);
    for (std::size_t t = 0; t < times.size(); ++t)
      for (int x = 0; x < n; ++x)
        for (int xp = 0; xp < n; ++xp)
          field[(t * block + x) * block + xp] =
              std::polar(1.0, m * grid.position(x)) * std::polar(1.0, -0.3 * xp);
    return make_dense_density(1, grid, times, field);
  };
  SpaceTimeDensity high = lp_project(mode_field(4), 2.0, LpMode::leq, {0});
  double worst = 0.0;
  for (const cplx& v : high.field) worst = std::max(worst, std::abs(v));
  CHECK(worst < 1e-13);

  SpaceTimeDensity low = lp_project(mode_field(2), 2.0, LpMode::leq, {0});
  CHECK(max_field_diff(low, mode_field(2)) < 1e-13);
}

TEST_CASE("annular shells partition the norm and are orthogonal") {
  LatticeGrid grid(1, 16, 2.0 * kPi);
  SpaceTimeDensity alpha = random_dense(1, grid, 2, 37u);
  const double total_sq = st_norm(alpha) * st_norm(alpha);
  double partition = 0.0;
  for (double M = 1.0; M <= 16.0; M *= 2.0) {
    const double piece = st_norm(lp_project(alpha, M, LpMode::annular, {0}));
    partition += piece * piece;
  }
  CHECK(partition == doctest::Approx(total_sq).epsilon(1e-12));

  double cross = 0.0;
  for (double M0 = 1.0; M0 <= 16.0; M0 *= 2.0)
    for (double M1 = 1.0; M1 <= 16.0; M1 *= 2.0) {
      const double piece = st_norm(
          lp_project(lp_project(alpha, M0, LpMode::annular, {0}), M1, LpMode::annular, {1}));
      cross += piece * piece;
    }
  CHECK(cross == doctest::Approx(total_sq).epsilon(1e-12));

  SpaceTimeDensity far = lp_project(lp_project(alpha, 4.0, LpMode::annular, {0}), 1.0,
                                    LpMode::annular, {0});
  double worst = 0.0;
  for (const cplx& v : far.field) worst = std::max(worst, std::abs(v));
  CHECK(worst < 1e-13);

  SpaceTimeDensity adjacent = lp_project(lp_project(alpha, 4.0, LpMode::annular, {0}), 2.0,
                                         LpMode::annular, {0});
  worst = 0.0;
  for (const cplx& v : adjacent.field) worst = std::max(worst, std::abs(v));
  CHECK(worst < 1e-13);
}

TEST_CASE("cutoff at or above the Nyquist corner is the identity with a warning") {
  LatticeGrid grid(1, 8, 2.0 * kPi);
  SpaceTimeDensity alpha = random_dense(1, grid, 2, 41u);
  SpaceTimeDensity out = lp_project(alpha, 4.0, LpMode::leq, {0, 1});
  CHECK(out.warnings.size() == 1);
  CHECK(out.warnings[0].find("identity") != std::string::npos);
  CHECK(max_field_diff(alpha, out) == 0.0);
}

TEST_CASE("low-rank projection commutes with expansion") {
  LatticeGrid grid(1, 16, 2.0 * kPi);
  SpaceTimeDensity low = random_low_rank(2, grid, 2, 2, 53u);
  for (auto coords : std::vector<std::vector<int>>{{0}, {1, 2}, {3}, {0, 1, 2, 3}}) {
    SpaceTimeDensity a = expand_density(lp_project(low, 2.0, LpMode::leq, coords));
    SpaceTimeDensity b = lp_project(expand_density(low), 2.0, LpMode::leq, coords);
    CHECK(max_field_diff(a, b) < 1e-12);
  }
}

TEST_CASE("d=3 cutoff tests the Euclidean magnitude of one coordinate") {
  LatticeGrid grid(3, 8, 2.0 * kPi);
  SpaceTimeDensity alpha = random_dense(1, grid, 2, 67u);
  SpaceTimeDensity cut = lp_project(alpha, 2.0, LpMode::leq, {0});

  const int n = grid.points_per_axis();
  const std::size_t block = grid.total_points(3);
  std::vector<cplx> want = alpha.field;
  for (std::size_t t = 0; t < alpha.times.size(); ++t) {
    cplx* slice = want.data() + t * block * block;
    for (int a = 0; a < 3; ++a) fft_axis(slice, 6, n, a, false);
    for (std::size_t f = 0; f < block * block; ++f) {
      std::size_t rest = f;
      int idx[6];
      for (int a = 5; a >= 0; --a) {
        idx[a] = static_cast<int>(rest % n);
        rest /= n;
      }
      double mag_sq = 0.0;
      for (int a = 0; a < 3; ++a) {
        int m = idx[a] < n / 2 ? idx[a] : idx[a] - n;
        mag_sq += static_cast<double>(m) * m;
      }
      if (mag_sq > 4.0 + 1e-9) slice[f] = cplx(0.0, 0.0);
    }
    for (int a = 0; a < 3; ++a) fft_axis(slice, 6, n, a, true);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i)
    worst = std::max(worst, std::abs(want[i] - cut.field[i]));
  CHECK(worst < 1e-12);

  double partition = 0.0;
  const double total_sq = st_norm(alpha) * st_norm(alpha);
  for (double M = 1.0; M <= 8.0; M *= 2.0) {
    const double piece = st_norm(lp_project(alpha, M, LpMode::annular, {1}));
    partition += piece * piece;
  }
  CHECK(partition == doctest::Approx(total_sq).epsilon(1e-12));
}

TEST_CASE("projector struct overload matches the positional form") {
  LatticeGrid grid(1, 8, 2.0 * kPi);
  SpaceTimeDensity alpha = random_dense(1, grid, 2, 71u);
  DyadicProjector proj;
  proj.level = 2.0;
  proj.mode = LpMode::annular;
  proj.coords = {0, 1};
  CHECK(max_field_diff(lp_project(alpha, proj), lp_project(alpha, 2.0, LpMode::annular, {0, 1})) ==
        0.0);
}

TEST_CASE("density construction rejects malformed shapes") {
  LatticeGrid grid(1, 8, 2.0 * kPi);
  const std::size_t block = grid.total_points(1);
  std::vector<double> times = uniform_times(2, 0.0, 0.5);
  std::vector<cplx> field(2 * block * block);

  CHECK_THROWS_AS(make_dense_density(0, grid, times, field), DomainError);
  CHECK_THROWS_AS(make_dense_density(1, LatticeGrid(2, 8, 1.0), times,
                                     std::vector<cplx>(2 * 64 * 64)),
                  DomainError);
  CHECK_THROWS_AS(make_dense_density(1, grid, {0.0}, field), DomainError);
  CHECK_THROWS_AS(make_dense_density(1, grid, {0.0, 0.5, 0.7}, field), DomainError);
  CHECK_THROWS_AS(make_dense_density(1, grid, {0.5, 0.0}, field), DomainError);
  CHECK_THROWS_AS(make_dense_density(1, grid, times, std::vector<cplx>(7)), DomainError);

  SpaceTimeDensity::Term term;
  term.active = std::vector<cplx>(2 * block);
  term.passive = std::vector<cplx>(block);
  CHECK_THROWS_AS(make_low_rank_density(1, grid, times, {}), DomainError);
  CHECK_THROWS_AS(make_low_rank_density(1, grid, times,
                                        std::vector<SpaceTimeDensity::Term>(9, term)),
                  DomainError);
  SpaceTimeDensity::Term bad = term;
  bad.active.pop_back();
  CHECK_THROWS_AS(make_low_rank_density(1, grid, times, {bad}), DomainError);
  bad = term;
  bad.passive.push_back(cplx(0.0, 0.0));
  CHECK_THROWS_AS(make_low_rank_density(1, grid, times, {bad}), DomainError);

  SpaceTimeDensity alpha = make_dense_density(1, grid, times, field);
  CHECK_THROWS_AS(density_value(alpha, 2, 0, 0), DomainError);
  CHECK_THROWS_AS(density_value(alpha, 0, block, 0), DomainError);
  CHECK_THROWS_AS(lp_project(alpha, 3.0, LpMode::leq, {0}), DomainError);
  CHECK_THROWS_AS(lp_project(alpha, 0.5, LpMode::leq, {0}), DomainError);
  CHECK_THROWS_AS(lp_project(alpha, 2.0, LpMode::leq, {}), DomainError);
  CHECK_THROWS_AS(lp_project(alpha, 2.0, LpMode::leq, {2}), DomainError);
  CHECK_THROWS_AS(lp_project(alpha, 2.0, LpMode::leq, {0, 0}), DomainError);
}
