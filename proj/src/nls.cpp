#include "gphl/nls.hpp"

#include <cmath>
#include <utility>

#include "gphl/fft.hpp"

namespace gphl {

namespace {

// |xi|^2 at every flat index of the single-particle tensor.
std::vector<double> frequency_sq_table(const LatticeGrid& grid) {
  const int d = grid.dimension();
  std::vector<double> out(grid.total_points(d), 0.0);
  std::vector<int> idx(d, 0);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    grid.unflatten(flat, d, idx);
    double s = 0.0;
    for (int a = 0; a < d; ++a) {
      const double f = grid.frequency(idx[a]);
      s += f * f;
    }
    out[flat] = s;
  }
  return out;
}

void forward_all_axes(std::vector<cplx>& field, const LatticeGrid& grid) {
  const int d = grid.dimension();
  for (int a = 0; a < d; ++a)
    fft_axis(field.data(), d, static_cast<std::size_t>(grid.points_per_axis()),
             static_cast<std::size_t>(a), false);
}

void inverse_all_axes(std::vector<cplx>& field, const LatticeGrid& grid) {
  const int d = grid.dimension();
  for (int a = 0; a < d; ++a)
    fft_axis(field.data(), d, static_cast<std::size_t>(grid.points_per_axis()),
             static_cast<std::size_t>(a), true);
}

// L^2 norm of weight(|xi|^2) applied spectrally to the field.
double multiplier_norm(const LatticeGrid& grid, std::vector<cplx> field,
                       double (*weight)(double)) {
  forward_all_axes(field, grid);
  const std::vector<double> xi2 = frequency_sq_table(grid);
  double s = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double w = weight(xi2[i]);
    s += w * w * std::norm(field[i]);
  }
  // Parseval: sum_m |g_m|^2 = (1/n^d) sum_k |g_hat_k|^2.
  return std::sqrt(s * grid.cell_volume() / static_cast<double>(field.size()));
}

void check_trajectory(const NLSTrajectory& traj, std::size_t min_snapshots) {
  const auto& snaps = traj.snapshots;
  if (snaps.size() < min_snapshots)
    throw DomainError(min_snapshots == 1 ? "trajectory has no snapshots"
                                         : "trajectory needs at least two snapshots");
  const LatticeGrid& g0 = snaps.front().grid;
  for (const NLSField& f : snaps) {
    if (f.grid.dimension() != g0.dimension() ||
        f.grid.points_per_axis() != g0.points_per_axis() ||
        f.grid.box_length() != g0.box_length() || f.phi.size() != snaps.front().phi.size())
      throw DomainError("snapshots must share one grid");
  }
}

}  // namespace

NLSField make_nls_field(const LatticeGrid& grid, const std::vector<cplx>& phi, double coupling) {
  if (grid.dimension() != 1 && grid.dimension() != 3)
    throw DomainError("nls field supports d = 1 or 3");
  if (phi.size() != grid.total_points(grid.dimension()))
    throw DomainError("field does not match the grid");
  if (!(coupling >= 0.0)) throw DomainError("coupling must be nonnegative (defocusing)");
  NLSField f;
  f.grid = grid;
  f.phi = phi;
  f.coupling = coupling;
  return f;
}

double nls_mass(const NLSField& f) {
  double s = 0.0;
  for (const cplx& v : f.phi) s += std::norm(v);
  return s * f.grid.cell_volume();
}

double nls_energy(const NLSField& f) {
  std::vector<cplx> hat = f.phi;
  forward_all_axes(hat, f.grid);
  const std::vector<double> xi2 = frequency_sq_table(f.grid);
  double kinetic = 0.0;
  for (std::size_t i = 0; i < hat.size(); ++i) kinetic += xi2[i] * std::norm(hat[i]);
  kinetic *= f.grid.cell_volume() / static_cast<double>(hat.size());
  double quartic = 0.0;
  for (const cplx& v : f.phi) quartic += std::norm(v) * std::norm(v);
  return kinetic + 0.5 * f.coupling * f.grid.cell_volume() * quartic;
}

NLSField nls_propagate(const NLSField& f, double dt, int steps) {
  if (steps < 0) throw DomainError("step count must be nonnegative");
  NLSField out = f;
  if (steps == 0 || dt == 0.0) return out;

  const std::vector<double> xi2 = frequency_sq_table(out.grid);
  std::vector<cplx> half_kinetic(xi2.size());
  for (std::size_t i = 0; i < xi2.size(); ++i)
    half_kinetic[i] = std::polar(1.0, -0.5 * dt * xi2[i]);
  const double cdt = out.coupling * dt;

  for (int s = 0; s < steps; ++s) {
    forward_all_axes(out.phi, out.grid);
    for (std::size_t i = 0; i < out.phi.size(); ++i) out.phi[i] *= half_kinetic[i];
    inverse_all_axes(out.phi, out.grid);
    if (cdt != 0.0)
      for (cplx& v : out.phi) v *= std::polar(1.0, -cdt * std::norm(v));
    forward_all_axes(out.phi, out.grid);
    for (std::size_t i = 0; i < out.phi.size(); ++i) out.phi[i] *= half_kinetic[i];
    inverse_all_axes(out.phi, out.grid);
  }
  out.time += dt * steps;
  return out;
}

NLSTrajectory nls_trajectory(const NLSField& f, double dt, int steps, int snapshot_every) {
  if (steps < 0) throw DomainError("step count must be nonnegative");
  if (snapshot_every < 1) throw DomainError("snapshot cadence must be positive");
  if (steps % snapshot_every != 0)
    throw DomainError("snapshot cadence must divide the step count");
  const std::size_t count = static_cast<std::size_t>(steps / snapshot_every) + 1;
  require_within_budget(count * f.phi.size() * sizeof(cplx), memory_budget_bytes(),
                        "nls trajectory");
  NLSTrajectory traj;
  traj.snapshots.reserve(count);
  traj.snapshots.push_back(f);
  for (std::size_t i = 1; i < count; ++i)
    traj.snapshots.push_back(nls_propagate(traj.snapshots.back(), dt, snapshot_every));
  return traj;
}

double esy_functional(const NLSTrajectory& traj) {
  check_trajectory(traj, 1);
  double best = 0.0;
  for (const NLSField& f : traj.snapshots)
    best = std::max(best, multiplier_norm(f.grid, f.phi,
                                          [](double x2) { return std::sqrt(1.0 + x2); }));
  return best;
}

double km_functional(const NLSTrajectory& traj) {
  check_trajectory(traj, 2);
  const auto& snaps = traj.snapshots;
  const double dt0 = snaps[1].time - snaps[0].time;
  if (!(dt0 > 0.0)) throw DomainError("snapshots must advance in time");
  for (std::size_t i = 2; i < snaps.size(); ++i) {
    const double dt = snaps[i].time - snaps[i - 1].time;
    if (std::abs(dt - dt0) > 1e-9 * std::max(dt0, 1.0))
      throw DomainError("snapshots must be uniformly spaced");
  }
  std::vector<double> g(snaps.size());
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    std::vector<cplx> cubic(snaps[i].phi.size());
    for (std::size_t m = 0; m < cubic.size(); ++m)
      cubic[m] = std::norm(snaps[i].phi[m]) * snaps[i].phi[m];
    g[i] = multiplier_norm(snaps[i].grid, std::move(cubic),
                           [](double x2) { return std::sqrt(x2); });
  }
  double sum = 0.5 * (g.front() + g.back());
  for (std::size_t i = 1; i + 1 < g.size(); ++i) sum += g[i];
  return sum * dt0;
}

}  // namespace gphl
