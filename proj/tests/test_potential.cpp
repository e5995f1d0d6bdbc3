#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gphl/potential.hpp"

using namespace gphl;

TEST_CASE("square barrier profile and integrals") {
  auto V = RadialPotential::square_barrier(2.0, 1.0);
  CHECK(V(0.0) == 2.0);
  CHECK(V(0.999) == 2.0);
  CHECK(V(1.001) == 0.0);
  CHECK(V.support_radius() == 1.0);
  CHECK(V.integral_3d() == doctest::Approx(8.0 * kPi / 3.0).epsilon(1e-14));
  CHECK(V.integral_1d() == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("gaussian profile and integrals") {
  auto V = RadialPotential::gaussian(1.5, 0.7);
  CHECK(V(0.0) == 1.5);
  CHECK(V(0.7) == doctest::Approx(1.5 * std::exp(-1.0)).epsilon(1e-14));
  CHECK(V(V.r_max()) <= 1e-14 * 1.5);
  // A pi^{3/2} w^3 and A w sqrt(pi).
  CHECK(V.integral_3d() == doctest::Approx(1.5 * std::pow(kPi, 1.5) * 0.343).epsilon(1e-12));
  CHECK(V.integral_1d() == doctest::Approx(1.5 * 0.7 * std::sqrt(kPi)).epsilon(1e-12));
  CHECK(V.derivative(0.5) ==
        doctest::Approx((V(0.5 + 1e-7) - V(0.5 - 1e-7)) / 2e-7).epsilon(1e-6));
}

TEST_CASE("tabulated spline reproduces samples and integrates") {
  std::vector<double> r, v;
  for (int i = 0; i <= 200; ++i) {
    double x = 6.0 * i / 200.0;
    r.push_back(x);
    v.push_back(std::exp(-x * x));
  }
  v.back() = 0.0;
  auto V = RadialPotential::tabulated(r, v);
  for (int i = 0; i <= 200; i += 17) CHECK(V(r[i]) == doctest::Approx(v[i]).epsilon(1e-12));
  CHECK(V(0.511) == doctest::Approx(std::exp(-0.511 * 0.511)).epsilon(1e-6));
  CHECK(V.integral_3d() == doctest::Approx(std::pow(kPi, 1.5)).epsilon(1e-6));
  CHECK(V(7.0) == 0.0);
}

TEST_CASE("validation rejects bad inputs") {
  CHECK_THROWS_AS(RadialPotential::square_barrier(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(RadialPotential::square_barrier(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(RadialPotential::square_barrier(1.0, 1.0, 1.5), DomainError);  // r_max < 2R
  CHECK_THROWS_AS(RadialPotential::gaussian(1.0, -0.5), DomainError);
  // Not decayed by r_max.
  CHECK_THROWS_AS(RadialPotential::gaussian(1.0, 1.0, 2.5), DomainError);
  CHECK_THROWS_AS(RadialPotential::tabulated({0.0, 1.0}, {1.0, -0.2}), DomainError);
  CHECK_THROWS_AS(RadialPotential::tabulated({1.0, 0.5}, {1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(RadialPotential::tabulated({0.0}, {1.0}), DomainError);
}

TEST_CASE("zero potential is representable") {
  auto V = RadialPotential::square_barrier(0.0, 1.0);
  CHECK(V.is_zero());
  CHECK(V.integral_3d() == 0.0);
  CHECK(V(0.5) == 0.0);
}
