#include "gphl/scattering.hpp"

#include <algorithm>
#include <cmath>

namespace gphl {

namespace {

struct RawSolve {
  std::vector<double> r, u;
  double slope = 1.0;      // alpha of the affine tail fit of the raw solve
  double intercept = 0.0;  // a with u_raw ~ alpha (r - a)
  std::size_t tail_begin = 0;
};

// RK4 on u'' = f(r) u over one uniform piece, appending to (r, u).
void integrate_piece(const std::function<double(double)>& f, double r0, double r1, int steps,
                     std::vector<double>& r, std::vector<double>& u, double& ur, double& vr) {
  double h = (r1 - r0) / steps;
  for (int i = 0; i < steps; ++i) {
    double x = r0 + h * i;
    double f0 = f(x), fh = f(x + 0.5 * h), f1 = f(x + h);
    double k1u = vr, k1v = f0 * ur;
    double k2u = vr + 0.5 * h * k1v, k2v = fh * (ur + 0.5 * h * k1u);
    double k3u = vr + 0.5 * h * k2v, k3v = fh * (ur + 0.5 * h * k2u);
    double k4u = vr + h * k3v, k4v = f1 * (ur + h * k3u);
    ur += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    vr += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    r.push_back(x + h);
    u.push_back(ur);
  }
}

RawSolve raw_solve(const RadialPotential& V, double s, int n_per_piece, double tol) {
  double Rs = V.support_radius();
  double rmax = V.r_max();
  // One-sided values at the support edge keep each piece's integrand smooth
  // when the profile jumps there (square barrier).
  auto f_in = [&](double r) { return 0.5 * s * V.value_sided(r, -1); };
  auto f_out = [&](double r) { return 0.5 * s * V.value_sided(r, +1); };
  RawSolve out;
  out.r.reserve(2 * static_cast<std::size_t>(n_per_piece) + 1);
  out.u.reserve(out.r.capacity());
  out.r.push_back(0.0);
  out.u.push_back(0.0);
  double ur = 0.0, vr = 1.0;
  integrate_piece(f_in, 0.0, Rs, n_per_piece, out.r, out.u, ur, vr);
  integrate_piece(f_out, Rs, rmax, n_per_piece, out.r, out.u, ur, vr);

  // Affine tail fit on r >= 1.5 * support; exact for compactly supported V.
  double fit_from = 1.5 * Rs;
  std::size_t first = 0;
  while (first < out.r.size() && out.r[first] < fit_from) ++first;
  std::size_t count = out.r.size() - first;
  if (count < 10) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "tail fit region [%.6g, %.6g] has %zu samples; increase r_max to at least %.6g",
                  fit_from, rmax, count, 3.0 * std::max(Rs, 1.0));
    throw DomainError(buf);
  }
  out.tail_begin = first;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = first; i < out.r.size(); ++i) {
    sx += out.r[i];
    sy += out.u[i];
    sxx += out.r[i] * out.r[i];
    sxy += out.r[i] * out.u[i];
  }
  double n = static_cast<double>(count);
  double denom = n * sxx - sx * sx;
  double alpha = (n * sxy - sx * sy) / denom;
  double gamma = (sy - alpha * sx) / n;
  if (!(alpha > 0.0)) throw NumericalError("tail fit produced a nonpositive slope");
  double worst = 0.0;
  for (std::size_t i = first; i < out.r.size(); ++i)
    worst = std::max(worst, std::abs(out.u[i] - (alpha * out.r[i] + gamma)));
  if (worst > std::max(tol, 1e-9) * alpha * rmax) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "tail fit did not converge (relative misfit %.3g); increase r_max beyond %.6g",
                  worst / (alpha * rmax), rmax);
    throw DomainError(buf);
  }
  out.slope = alpha;
  out.intercept = -gamma / alpha;
  return out;
}

double fd_residual(const std::vector<double>& r, const std::vector<double>& u,
                   const std::function<double(double)>& f, std::size_t begin, std::size_t end) {
  // 4th-order interior stencil on one uniform piece [begin, end).
  if (end - begin < 5) return 0.0;
  double h = r[begin + 1] - r[begin];
  double worst = 0.0, scale = 1.0;
  for (std::size_t i = begin; i < end; ++i) scale = std::max(scale, std::abs(f(r[i]) * u[i]));
  for (std::size_t i = begin + 2; i + 2 < end; ++i) {
    double d2 = (-u[i - 2] + 16.0 * u[i - 1] - 30.0 * u[i] + 16.0 * u[i + 1] - u[i + 2]) /
                (12.0 * h * h);
    worst = std::max(worst, std::abs(d2 - f(r[i]) * u[i]));
  }
  return worst / scale;
}

}  // namespace

ScatteringSolution solve_zero_energy(const RadialPotential& V, double N, double beta, double tol) {
  if (!(N >= 1.0)) throw DomainError("particle count must be at least 1");
  if (!(beta > 0.0) || beta > 1.0) throw DomainError("beta must lie in (0, 1]");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  double s = std::pow(N, beta - 1.0);

  ScatteringSolution sol;
  sol.beta = beta;
  sol.N = N;
  sol.screening = s;
  sol.support_radius = V.support_radius();

  if (V.is_zero()) {
    int n = 256;
    for (int i = 0; i <= n; ++i) {
      double r = V.r_max() * i / n;
      sol.r_grid.push_back(r);
      sol.u.push_back(r);
      sol.w0.push_back(0.0);
    }
    return sol;
  }

  const int fine = 1600;
  RawSolve coarse = raw_solve(V, s, fine / 2, tol);
  RawSolve solve = raw_solve(V, s, fine, tol);

  // RK4 is 4th order; one Richardson step cancels the leading error term.
  double a_screened = (16.0 * solve.intercept - coarse.intercept) / 15.0;
  sol.tail_intercept = a_screened;
  sol.a0 = a_screened / s;

  double alpha = solve.slope;
  sol.r_grid = std::move(solve.r);
  sol.u = std::move(solve.u);
  for (double& v : sol.u) v /= alpha;
  sol.w0.resize(sol.u.size());
  sol.w0[0] = (1.0 - 1.0 / alpha) / s;
  for (std::size_t i = 1; i < sol.u.size(); ++i)
    sol.w0[i] = (1.0 - sol.u[i] / sol.r_grid[i]) / s;
  sol.w0_at_origin = sol.w0[0];

  auto f_in = [&](double r) { return 0.5 * s * V.value_sided(r, -1); };
  auto f_out = [&](double r) { return 0.5 * s * V.value_sided(r, +1); };
  std::size_t piece = static_cast<std::size_t>(fine);
  double res1 = fd_residual(sol.r_grid, sol.u, f_in, 0, piece + 1);
  double res2 = fd_residual(sol.r_grid, sol.u, f_out, piece, sol.u.size());
  sol.residual = std::max(res1, res2);
  if (sol.residual > tol) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "zero-energy ODE residual %.3g exceeds tolerance %.3g",
                  sol.residual, tol);
    throw NumericalError(buf);
  }
  return sol;
}

double scattering_length(const RadialPotential& V) {
  return solve_zero_energy(V, 1.0, 1.0).a0;
}

double coupling_constant(const RadialPotential& V, double beta) {
  if (!(beta > 0.0) || beta > 1.0) throw DomainError("beta must lie in (0, 1]");
  if (beta < 1.0) return V.integral_3d();
  return 8.0 * kPi * scattering_length(V);
}

std::vector<BornScanRow> born_limit_scan(const RadialPotential& V, double beta,
                                         const std::vector<double>& N_list) {
  if (!(beta > 0.0) || beta > 1.0) throw DomainError("beta must lie in (0, 1]");
  for (std::size_t i = 1; i < N_list.size(); ++i)
    if (!(N_list[i] > N_list[i - 1])) throw DomainError("N_list must be strictly increasing");
  std::vector<BornScanRow> rows;
  rows.reserve(N_list.size());
  for (double N : N_list) {
    ScatteringSolution sol = solve_zero_energy(V, N, beta);
    rows.push_back({N, beta, 8.0 * kPi * sol.a0, sol.residual});
  }
  return rows;
}

DecayProfile decay_profile(const ScatteringSolution& sol) {
  if (!(sol.a0 > 0.0)) throw DomainError("decay profile requires a nonzero potential");
  double fit_from = 1.5 * sol.support_radius;
  std::vector<double> lr, lw, lg;
  for (std::size_t i = 1; i + 1 < sol.r_grid.size(); ++i) {
    if (sol.r_grid[i] < fit_from) continue;
    if (sol.w0[i] <= 0.0) continue;
    lr.push_back(std::log(sol.r_grid[i]));
    lw.push_back(std::log(sol.w0[i]));
    double dw = (sol.w0[i + 1] - sol.w0[i - 1]) / (sol.r_grid[i + 1] - sol.r_grid[i - 1]);
    lg.push_back(std::log(std::max(std::abs(dw), 1e-300)));
  }
  if (lr.size() < 10)
    throw DomainError("fewer than 10 exterior samples; enlarge r_max for the decay fit");
  auto ls_slope = [&](const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lr.size(); ++i) {
      sx += lr[i];
      sy += y[i];
      sxx += lr[i] * lr[i];
      sxy += lr[i] * y[i];
    }
    double n = static_cast<double>(lr.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  return {ls_slope(lw), ls_slope(lg)};
}

BarrierScattering::BarrierScattering(double height, double radius, double screening)
    : V0(height), R(radius), s(screening) {
  if (!(R > 0.0)) throw DomainError("barrier radius must be positive");
  if (V0 < 0.0 || s < 0.0) throw DomainError("barrier height and screening must be nonnegative");
  kappa = std::sqrt(0.5 * s * V0);
  a = kappa > 0.0 ? R - std::tanh(kappa * R) / kappa : 0.0;
}

double BarrierScattering::u(double r) const {
  if (kappa == 0.0) return r;
  if (r <= R) return std::sinh(kappa * r) / (kappa * std::cosh(kappa * R));
  return r - a;
}

double BarrierScattering::du(double r) const {
  if (kappa == 0.0) return 1.0;
  if (r <= R) return std::cosh(kappa * r) / std::cosh(kappa * R);
  return 1.0;
}

double BarrierScattering::phi(double r) const {
  if (kappa == 0.0) return 1.0;
  if (r > R) return 1.0 - a / r;
  double kr = kappa * r;
  if (kr < 1e-4) {
    double kr2 = kr * kr;
    return (1.0 + kr2 / 6.0 + kr2 * kr2 / 120.0) / std::cosh(kappa * R);
  }
  return std::sinh(kr) / (kr * std::cosh(kappa * R));
}

double BarrierScattering::dphi(double r) const {
  if (kappa == 0.0) return 0.0;
  if (r > R) return a / (r * r);
  double kr = kappa * r;
  if (kr < 1e-4) {
    // d/dr [sinh(kr)/(kr)] = k (kr cosh kr - sinh kr)/(kr)^2 ~ k^2 r / 3.
    return kappa * kappa * r * (1.0 / 3.0 + kr * kr / 30.0) / std::cosh(kappa * R);
  }
  return (du(r) * r - u(r)) / (r * r);
}

ScaledPotential::ScaledPotential(RadialPotential base, double N, double beta, int dimension)
    : base_(std::move(base)), N_(N), beta_(beta), d_(dimension) {
  if (!(N_ >= 1.0)) throw DomainError("particle count must be at least 1");
  if (!(beta_ > 0.0) || beta_ > 1.0) throw DomainError("beta must lie in (0, 1]");
  if (d_ != 1 && d_ != 3) throw DomainError("scaled potential supports d = 1 or 3");
  lambda_ = std::pow(N_, beta_);
  screening_ = std::pow(N_, beta_ - 1.0);
  if (base_.is_zero()) {
    closed_form_ = true;
    barrier_ = BarrierScattering(0.0, 1.0, screening_);
  } else if (base_.kind() == PotentialKind::SquareBarrier) {
    closed_form_ = true;
    barrier_ = BarrierScattering(base_.param_a(), base_.param_b(), screening_);
  } else {
    sol_ = solve_zero_energy(base_, N_, beta_, 1e-6);
  }
}

double ScaledPotential::VN(double r) const {
  return std::pow(N_, d_ * beta_) * base_(lambda_ * r);
}

double ScaledPotential::wN(double r) const {
  double rho = lambda_ * std::abs(r);
  if (closed_form_) return 1.0 - barrier_.phi(rho);
  // Exterior tail is exactly a0 / rho; interior interpolates the solve.
  if (rho >= sol_.support_radius && rho > 0.0) return screening_ * sol_.a0 / rho;
  const auto& rg = sol_.r_grid;
  auto it = std::upper_bound(rg.begin(), rg.end(), rho);
  std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(it - rg.begin()), rg.size() - 1);
  if (j == 0) return screening_ * sol_.w0[0];
  double t = (rho - rg[j - 1]) / (rg[j] - rg[j - 1]);
  return screening_ * ((1.0 - t) * sol_.w0[j - 1] + t * sol_.w0[j]);
}

double ScaledPotential::dressing_radial_derivative(double r) const {
  double rho = lambda_ * std::abs(r);
  if (closed_form_) return lambda_ * barrier_.dphi(rho);
  // d/dr [1 - s w0(lambda r)] by centered difference on the interpolant.
  double h = 1e-6 * std::max(1.0, std::abs(r));
  double lo = std::max(std::abs(r) - h, 0.0);
  return (wN(lo) - wN(std::abs(r) + h)) / (std::abs(r) + h - lo);
}

double ScaledPotential::a0() const { return closed_form_ ? barrier_.a0() : sol_.a0; }

double ScaledPotential::integral_identity_gap() const {
  double target = base_.integral(d_);
  if (target == 0.0) return 0.0;
  double cut = base_.support_radius() / lambda_;
  double top = base_.r_max() / lambda_;
  auto f3 = [&](double r) { return r * r * VN(r); };
  auto f1 = [&](double r) { return VN(r); };
  double tol = 1e-12 * target;
  double got;
  if (d_ == 3)
    got = 4.0 * kPi * (quad_integrate(f3, 0.0, cut, tol) + quad_integrate(f3, cut, top, tol));
  else
    got = 2.0 * (quad_integrate(f1, 0.0, cut, tol) + quad_integrate(f1, cut, top, tol));
  return std::abs(got - target) / target;
}

}  // namespace gphl
