#include "gphl/potential.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace gphl {

namespace {

constexpr double kSupportCut = 1e-14;

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

// Natural cubic spline second derivatives via the standard tridiagonal solve.
std::vector<double> spline_second_derivs(const std::vector<double>& x,
                                         const std::vector<double>& y) {
  std::size_t n = x.size();
  std::vector<double> m(n, 0.0);
  if (n < 3) return m;
  std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
  diag[0] = 1.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
    diag[i] = 2.0 * (h0 + h1);
    upper[i] = h1;
    rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
  }
  diag[n - 1] = 1.0;
  // Thomas algorithm; lower diagonal at row i is h0 = x[i]-x[i-1].
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double lower = x[i] - x[i - 1];
    double w = lower / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
    if (i == 1) break;
  }
  return m;
}

}  // namespace

double quad_integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  const int panels = 16;
  double total = 0.0;
  double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    double pa = a + w * p, pb = p + 1 == panels ? b : a + w * (p + 1);
    double m = 0.5 * (pa + pb);
    double fa = f(pa), fm = f(m), fb = f(pb);
    double whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
    total += adaptive_simpson(f, pa, pb, fa, fm, fb, whole, tol / panels, 44);
  }
  return total;
}

RadialPotential RadialPotential::square_barrier(double height, double radius, double r_max) {
  RadialPotential p;
  p.kind_ = PotentialKind::SquareBarrier;
  p.p1_ = height;
  p.p2_ = radius;
  p.peak_ = height;
  p.support_radius_ = height > 0.0 ? radius : 0.0;
  p.r_max_ = r_max > 0.0 ? r_max : 4.0 * std::max(radius, 1.0);
  p.validate();
  return p;
}

RadialPotential RadialPotential::gaussian(double amplitude, double width, double r_max) {
  RadialPotential p;
  p.kind_ = PotentialKind::Gaussian;
  p.p1_ = amplitude;
  p.p2_ = width;
  p.peak_ = amplitude;
  // V(r) drops below kSupportCut * amplitude at width * sqrt(ln 1e14).
  p.support_radius_ = amplitude > 0.0 ? width * std::sqrt(-std::log(kSupportCut)) : 0.0;
  p.r_max_ = r_max > 0.0 ? r_max : 4.0 * std::max(p.support_radius_, 1.0);
  p.validate();
  return p;
}

RadialPotential RadialPotential::tabulated(std::vector<double> r_samples,
                                           std::vector<double> values, double r_max) {
  RadialPotential p;
  p.kind_ = PotentialKind::Tabulated;
  if (r_samples.size() != values.size() || r_samples.size() < 2)
    throw DomainError("tabulated potential needs >= 2 matching samples");
  for (std::size_t i = 1; i < r_samples.size(); ++i)
    if (!(r_samples[i] > r_samples[i - 1]))
      throw DomainError("tabulated r-samples must be strictly increasing");
  if (r_samples.front() < 0.0) throw DomainError("tabulated r-samples must be nonnegative");
  p.tab_r_ = std::move(r_samples);
  p.tab_v_ = std::move(values);
  p.peak_ = *std::max_element(p.tab_v_.begin(), p.tab_v_.end());
  p.support_radius_ = 0.0;
  for (std::size_t i = 0; i < p.tab_r_.size(); ++i)
    if (p.tab_v_[i] > kSupportCut * std::max(p.peak_, 1.0)) p.support_radius_ = p.tab_r_[i];
  p.spline_m_ = spline_second_derivs(p.tab_r_, p.tab_v_);
  p.r_max_ = r_max > 0.0 ? r_max : std::max(p.tab_r_.back(), 4.0 * std::max(p.support_radius_, 1.0));
  p.validate();
  return p;
}

void RadialPotential::validate() const {
  auto bad = [](double v) { return !(v >= 0.0) || !std::isfinite(v); };
  switch (kind_) {
    case PotentialKind::SquareBarrier:
      if (bad(p1_)) throw DomainError("square barrier height must be nonnegative");
      if (!(p2_ > 0.0)) throw DomainError("square barrier radius must be positive");
      break;
    case PotentialKind::Gaussian:
      if (bad(p1_)) throw DomainError("gaussian amplitude must be nonnegative");
      if (!(p2_ > 0.0)) throw DomainError("gaussian width must be positive");
      break;
    case PotentialKind::Tabulated:
      for (double v : tab_v_)
        if (bad(v)) throw DomainError("tabulated potential values must be nonnegative");
      break;
  }
  if (!(r_max_ > 0.0)) throw DomainError("r_max must be positive");
  if (peak_ > 0.0 && r_max_ < 2.0 * support_radius_)
    throw DomainError("r_max must be at least twice the support radius");
  if ((*this)(r_max_) > kSupportCut * std::max(peak_, 1.0))
    throw DomainError("potential has not decayed below 1e-14 by r_max");
}

double RadialPotential::operator()(double r) const {
  if (r < 0.0) r = -r;
  switch (kind_) {
    case PotentialKind::SquareBarrier:
      return r <= p2_ ? p1_ : 0.0;
    case PotentialKind::Gaussian: {
      double t = r / p2_;
      return p1_ * std::exp(-t * t);
    }
    case PotentialKind::Tabulated: {
      if (r >= tab_r_.back()) return 0.0;
      if (r <= tab_r_.front()) return tab_v_.front();
      auto it = std::upper_bound(tab_r_.begin(), tab_r_.end(), r);
      std::size_t j = static_cast<std::size_t>(it - tab_r_.begin());
      double h = tab_r_[j] - tab_r_[j - 1];
      double A = (tab_r_[j] - r) / h, B = 1.0 - A;
      double v = A * tab_v_[j - 1] + B * tab_v_[j] +
                 ((A * A * A - A) * spline_m_[j - 1] + (B * B * B - B) * spline_m_[j]) * h * h /
                     6.0;
      return std::max(v, 0.0);
    }
  }
  return 0.0;
}

double RadialPotential::value_sided(double r, int side) const {
  if (kind_ == PotentialKind::SquareBarrier && r == p2_) return side < 0 ? p1_ : 0.0;
  return (*this)(r);
}

double RadialPotential::derivative(double r) const {
  if (r < 0.0) r = -r;
  switch (kind_) {
    case PotentialKind::Gaussian: {
      double t = r / p2_;
      return -2.0 * r / (p2_ * p2_) * p1_ * std::exp(-t * t);
    }
    default: {
      double h = 1e-6 * std::max(1.0, r);
      return ((*this)(r + h) - (*this)(std::max(r - h, 0.0))) / (r - h < 0.0 ? r + h : 2.0 * h);
    }
  }
}

double RadialPotential::integral_3d() const {
  switch (kind_) {
    case PotentialKind::SquareBarrier:
      return p1_ * 4.0 * kPi / 3.0 * p2_ * p2_ * p2_;
    case PotentialKind::Gaussian:
      // 4*pi * A * int_0^inf r^2 e^{-(r/w)^2} dr = A * pi^{3/2} w^3.
      return p1_ * std::pow(kPi, 1.5) * p2_ * p2_ * p2_;
    case PotentialKind::Tabulated: {
      auto f = [this](double r) { return r * r * (*this)(r); };
      return 4.0 * kPi * quad_integrate(f, 0.0, tab_r_.back(), 1e-12);
    }
  }
  return 0.0;
}

double RadialPotential::integral_1d() const {
  switch (kind_) {
    case PotentialKind::SquareBarrier:
      return 2.0 * p1_ * p2_;
    case PotentialKind::Gaussian:
      return p1_ * p2_ * std::sqrt(kPi);
    case PotentialKind::Tabulated: {
      auto f = [this](double r) { return (*this)(r); };
      return 2.0 * quad_integrate(f, 0.0, tab_r_.back(), 1e-12);
    }
  }
  return 0.0;
}

double RadialPotential::integral(int dimension) const {
  if (dimension == 3) return integral_3d();
  if (dimension == 1) return integral_1d();
  throw DomainError("potential integral supported for d = 1 or 3");
}

std::string RadialPotential::kind_name() const {
  switch (kind_) {
    case PotentialKind::SquareBarrier:
      return "square_barrier";
    case PotentialKind::Gaussian:
      return "gaussian";
    case PotentialKind::Tabulated:
      return "tabulated";
  }
  return "";
}

}  // namespace gphl
