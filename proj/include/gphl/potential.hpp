#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gphl/common.hpp"

namespace gphl {

// Composite adaptive Simpson: the range is pre-split into uniform panels so a
// coarse first sample cannot hide localized mass, then each panel is refined
// adaptively to the absolute tolerance.
double quad_integrate(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-12);

enum class PotentialKind { SquareBarrier, Gaussian, Tabulated };

// Nonnegative, spherically symmetric pair potential on R^3 (also reused as the
// even profile V(|x|) for the d=1 surrogate). Compactly supported, or decayed
// below 1e-14 of its peak by r_max.
class RadialPotential {
 public:
  static RadialPotential square_barrier(double height, double radius, double r_max = 0.0);
  static RadialPotential gaussian(double amplitude, double width, double r_max = 0.0);
  static RadialPotential tabulated(std::vector<double> r_samples, std::vector<double> values,
                                   double r_max = 0.0);

  PotentialKind kind() const { return kind_; }
  double operator()(double r) const;
  // One-sided value at jump discontinuities: side < 0 takes the limit from
  // below, side > 0 from above. Piecewise integrators use this at the nodes
  // they align with the jump.
  double value_sided(double r, int side) const;
  // First radial derivative (one-sided limits at jump discontinuities).
  double derivative(double r) const;
  double support_radius() const { return support_radius_; }
  double r_max() const { return r_max_; }
  bool is_zero() const { return peak_ <= 0.0; }
  double peak() const { return peak_; }

  // Closed form where available, adaptive Simpson otherwise.
  double integral_3d() const;  // 4*pi * int r^2 V dr
  double integral_1d() const;  // 2 * int_0^inf V dr
  double integral(int dimension) const;

  double param_a() const { return p1_; }  // height / amplitude / unused
  double param_b() const { return p2_; }  // radius / width / unused
  const std::vector<double>& table_r() const { return tab_r_; }
  const std::vector<double>& table_v() const { return tab_v_; }
  std::string kind_name() const;

 private:
  RadialPotential() = default;
  void validate() const;

  PotentialKind kind_ = PotentialKind::SquareBarrier;
  double p1_ = 0.0, p2_ = 1.0;
  double support_radius_ = 0.0;
  double r_max_ = 0.0;
  double peak_ = 0.0;
  std::vector<double> tab_r_, tab_v_;
  std::vector<double> spline_m_;  // natural-spline second derivatives
};

}  // namespace gphl
