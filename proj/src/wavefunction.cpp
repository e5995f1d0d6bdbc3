#include "gphl/wavefunction.hpp"

#include <cmath>

#include "gphl/fft.hpp"

namespace gphl {

namespace {

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  while (e-- > 0) r *= base;
  return r;
}

void fft_all_axes(std::vector<cplx>& data, int rank, int n, bool inverse) {
  for (int a = 0; a < rank; ++a)
    fft_axis(data.data(), static_cast<std::size_t>(rank), static_cast<std::size_t>(n),
             static_cast<std::size_t>(a), inverse);
}

}  // namespace

std::size_t WaveFunction::particle_index(std::size_t flat, int particle) const {
  int d = grid.dimension();
  std::size_t block = ipow(static_cast<std::size_t>(grid.points_per_axis()), d);
  std::size_t shift = ipow(block, N - 1 - particle);
  return (flat / shift) % block;
}

double wavefunction_norm(const WaveFunction& psi) {
  double s = 0.0;
  for (const cplx& v : psi.amp) s += std::norm(v);
  double cell = 1.0;
  for (int a = 0; a < psi.axes(); ++a) cell *= psi.grid.spacing();
  return std::sqrt(s * cell);
}

double symmetry_defect(const WaveFunction& psi) {
  int d = psi.grid.dimension();
  std::size_t n = static_cast<std::size_t>(psi.grid.points_per_axis());
  std::size_t block = ipow(n, d);
  double worst = 0.0, peak = 0.0;
  for (const cplx& v : psi.amp) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  std::vector<std::size_t> shifts(static_cast<std::size_t>(psi.N));
  for (int p = 0; p < psi.N; ++p) shifts[static_cast<std::size_t>(p)] = ipow(block, psi.N - 1 - p);
  for (int i = 0; i < psi.N; ++i)
    for (int j = i + 1; j < psi.N; ++j) {
      for (std::size_t flat = 0; flat < psi.amp.size(); ++flat) {
        std::size_t pi = (flat / shifts[i]) % block;
        std::size_t pj = (flat / shifts[j]) % block;
        if (pi == pj) continue;
        std::size_t swapped = flat + (pj - pi) * shifts[i] + (pi - pj) * shifts[j];
        worst = std::max(worst, std::abs(psi.amp[flat] - psi.amp[swapped]));
      }
    }
  return worst / peak;
}

WaveFunction init_product_state(const LatticeGrid& grid, const std::vector<cplx>& phi, int N) {
  if (N < 1 || N > 8) throw DomainError("particle count must lie in [1, 8]");
  int d = grid.dimension();
  std::size_t block = grid.total_points(d);
  if (phi.size() != block) throw DomainError("single-particle field does not match the grid");
  std::size_t total = ipow(block, N);
  require_within_budget(total * sizeof(cplx) * 2, memory_budget_bytes(), "product state");

  WaveFunction psi;
  psi.N = N;
  psi.grid = grid;
  psi.time = 0.0;

  double cell = grid.cell_volume();
  double phi_norm2 = 0.0;
  for (const cplx& v : phi) phi_norm2 += std::norm(v);
  phi_norm2 *= cell;
  std::vector<cplx> base = phi;
  if (std::abs(phi_norm2 - 1.0) > 1e-12) {
    double scale = 1.0 / std::sqrt(phi_norm2);
    for (cplx& v : base) v *= scale;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "input field normalized (norm was %.12g)",
                  std::sqrt(phi_norm2));
    psi.warnings.push_back(buf);
  }

  psi.amp.assign(total, cplx(1.0, 0.0));
  std::vector<std::size_t> shifts(static_cast<std::size_t>(N));
  for (int p = 0; p < N; ++p) shifts[static_cast<std::size_t>(p)] = ipow(block, N - 1 - p);
  for (std::size_t flat = 0; flat < total; ++flat) {
    cplx v(1.0, 0.0);
    for (int p = 0; p < N; ++p) v *= base[(flat / shifts[p]) % block];
    psi.amp[flat] = v;
  }
  return psi;
}

std::vector<cplx> plane_wave_field(const LatticeGrid& grid, const std::vector<int>& mode) {
  int d = grid.dimension();
  if (static_cast<int>(mode.size()) != d) throw DomainError("mode must have one entry per axis");
  std::size_t block = grid.total_points(d);
  double L = grid.box_length();
  double amp = 1.0 / std::sqrt(std::pow(L, d));
  std::vector<cplx> phi(block);
  std::vector<int> idx;
  for (std::size_t f = 0; f < block; ++f) {
    grid.unflatten(f, d, idx);
    double phase = 0.0;
    for (int c = 0; c < d; ++c)
      phase += 2.0 * kPi * mode[c] * static_cast<double>(idx[c]) / grid.points_per_axis();
    phi[f] = amp * cplx(std::cos(phase), std::sin(phase));
  }
  return phi;
}

std::vector<cplx> gaussian_packet_field(const LatticeGrid& grid, double center, double width,
                                        int boost_mode) {
  if (grid.dimension() != 1) throw DomainError("gaussian packet helper is one-dimensional");
  int n = grid.points_per_axis();
  std::vector<cplx> phi(static_cast<std::size_t>(n));
  double L = grid.box_length();
  for (int m = 0; m < n; ++m) {
    double x = grid.position(m);
    // Periodized envelope: sum the three nearest images.
    double env = 0.0;
    for (int im = -1; im <= 1; ++im) {
      double dx = x - center + im * L;
      env += std::exp(-dx * dx / (2.0 * width * width));
    }
    double phase = 2.0 * kPi * boost_mode * static_cast<double>(m) / n;
    phi[static_cast<std::size_t>(m)] = env * cplx(std::cos(phase), std::sin(phase));
  }
  double norm2 = 0.0;
  for (const cplx& v : phi) norm2 += std::norm(v);
  norm2 *= grid.spacing();
  double scale = 1.0 / std::sqrt(norm2);
  for (cplx& v : phi) v *= scale;
  return phi;
}

PairPotentialTable::PairPotentialTable(const LatticeGrid& grid, const ScaledPotential& sp)
    : d_(grid.dimension()), n_(grid.points_per_axis()) {
  if (sp.dimension() != d_) throw DomainError("scaled potential dimension does not match grid");
  std::size_t block = grid.total_points(d_);
  table_.resize(block);
  std::vector<int> idx;
  for (std::size_t f = 0; f < block; ++f) {
    grid.unflatten(f, d_, idx);
    double r2 = 0.0;
    for (int c = 0; c < d_; ++c) {
      double dx = grid.min_image(grid.spacing() * idx[c]);
      r2 += dx * dx;
    }
    table_[f] = sp.VN(std::sqrt(r2));
  }
}

double PairPotentialTable::pair_value(std::size_t ia, std::size_t ib) const {
  // Component-wise index difference mod n, re-flattened into the table.
  std::size_t n = static_cast<std::size_t>(n_);
  std::size_t mul = 1;
  for (int c = 1; c < d_; ++c) mul *= n;
  std::size_t df = 0;
  for (int c = 0; c < d_; ++c) {
    std::size_t da = (ia / mul) % n, db = (ib / mul) % n;
    df = df * n + ((da + n - db) % n);
    if (c + 1 < d_) mul /= n;
  }
  return table_[df];
}

double PairPotentialTable::at_config(const WaveFunction& psi, std::size_t flat) const {
  double total = 0.0;
  for (int i = 0; i < psi.N; ++i) {
    std::size_t pi = psi.particle_index(flat, i);
    for (int j = i + 1; j < psi.N; ++j) total += pair_value(pi, psi.particle_index(flat, j));
  }
  return total;
}

WaveFunction propagate(const WaveFunction& psi, const ScaledPotential& sp, double dt, int steps) {
  if (steps < 0) throw DomainError("step count must be nonnegative");
  const LatticeGrid& grid = psi.grid;
  int d = grid.dimension();
  int rank = psi.axes();
  int n = grid.points_per_axis();
  std::size_t total = psi.amp.size();

  require_within_budget(total * sizeof(cplx) * 4 + total * sizeof(double),
                        memory_budget_bytes(), "propagation");

  WaveFunction out = psi;
  if (steps == 0) return out;

  // Interaction phase over configurations, built once.
  PairPotentialTable table(grid, sp);
  std::vector<cplx> pot_phase(total);
  {
    double scale = dt / static_cast<double>(psi.N);
    for (std::size_t f = 0; f < total; ++f) {
      double p = table.at_config(psi, f) * scale;
      pot_phase[f] = cplx(std::cos(p), -std::sin(p));
    }
  }

  // Kinetic multipliers; |xi|^2 accumulated digit-wise over all axes.
  std::vector<double> xi2(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    double xi = grid.frequency(m);
    xi2[static_cast<std::size_t>(m)] = xi * xi;
  }
  double max_kinetic = 0.0;
  std::vector<cplx> kin_half(total), kin_full(total);
  for (std::size_t f = 0; f < total; ++f) {
    double k2 = 0.0;
    std::size_t rem = f;
    for (int a = rank - 1; a >= 0; --a) {
      k2 += xi2[rem % static_cast<std::size_t>(n)];
      rem /= static_cast<std::size_t>(n);
    }
    max_kinetic = std::max(max_kinetic, k2);
    kin_half[f] = cplx(std::cos(0.5 * dt * k2), -std::sin(0.5 * dt * k2));
    kin_full[f] = cplx(std::cos(dt * k2), -std::sin(dt * k2));
  }
  if (dt * max_kinetic >= 0.5) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "dt * max kinetic eigenvalue = %.3g exceeds 0.5",
                  dt * max_kinetic);
    out.warnings.push_back(buf);
  }

  // K(dt/2) [V(dt) K(dt)]^(steps-1) V(dt) K(dt/2): interior half-steps merged.
  auto apply_mult = [&](const std::vector<cplx>& m) {
    for (std::size_t f = 0; f < total; ++f) out.amp[f] *= m[f];
  };
  fft_all_axes(out.amp, rank, n, false);
  apply_mult(kin_half);
  fft_all_axes(out.amp, rank, n, true);
  for (int s = 0; s < steps; ++s) {
    apply_mult(pot_phase);
    fft_all_axes(out.amp, rank, n, false);
    apply_mult(s + 1 < steps ? kin_full : kin_half);
    fft_all_axes(out.amp, rank, n, true);
  }
  out.time += dt * steps;
  return out;
}

}  // namespace gphl
