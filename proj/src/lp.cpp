#include "gphl/density.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

#include "gphl/fft.hpp"

namespace gphl {
namespace {

bool is_dyadic_level(double M) {
  if (!(M >= 1.0) || !std::isfinite(M)) return false;
  int exp = 0;
  return std::frexp(M, &exp) == 0.5;
}

void check_shape(int k, const LatticeGrid& grid, const std::vector<double>& times) {
  if (k < 1) throw DomainError("density order k must be at least 1");
  if (grid.dimension() == 2) throw DomainError("density grid must be d = 1 or 3");
  if (times.size() < 2) throw DomainError("density needs at least two time samples");
  const double dt = times[1] - times[0];
  if (!(dt > 0.0)) throw DomainError("density times must be ascending");
  for (std::size_t i = 1; i < times.size(); ++i) {
    double step = times[i] - times[i - 1];
    if (std::abs(step - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
      throw DomainError("density times must be uniformly spaced");
  }
}

bool keep_mode(double mag_sq, double M, LpMode mode) {
  const double hi = M * M * (1.0 + 1e-12);
  if (mode == LpMode::leq) return mag_sq <= hi;
  if (M <= 1.0) return mag_sq <= 1.0 + 1e-12;
  return mag_sq > 0.25 * hi && mag_sq <= hi;
}

// Sharp cutoff of one coordinate on a contiguous block: forward transform of
// the coordinate's axes, zero the rejected modes, transform back.
void cutoff_coordinate(cplx* block, int rank, int axis0, const LatticeGrid& grid, double M,
                       LpMode mode) {
  const int n = grid.points_per_axis();
  const int d = grid.dimension();
  std::size_t total = 1;
  for (int a = 0; a < rank; ++a) total *= static_cast<std::size_t>(n);
  for (int a = axis0; a < axis0 + d; ++a)
    fft_axis(block, static_cast<std::size_t>(rank), static_cast<std::size_t>(n),
             static_cast<std::size_t>(a), false);
  for (std::size_t f = 0; f < total; ++f) {
    if (!keep_mode(coordinate_frequency_sq(grid, f, rank, axis0), M, mode))
      block[f] = cplx(0.0, 0.0);
  }
  for (int a = axis0; a < axis0 + d; ++a)
    fft_axis(block, static_cast<std::size_t>(rank), static_cast<std::size_t>(n),
             static_cast<std::size_t>(a), true);
}

}  // namespace

double coordinate_frequency_sq(const LatticeGrid& grid, std::size_t flat, int rank, int axis0) {
  const int n = grid.points_per_axis();
  double sum = 0.0;
  for (int a = axis0; a < axis0 + grid.dimension(); ++a) {
    std::size_t stride = 1;
    for (int b = a + 1; b < rank; ++b) stride *= static_cast<std::size_t>(n);
    int idx = static_cast<int>((flat / stride) % static_cast<std::size_t>(n));
    double xi = grid.frequency(idx);
    sum += xi * xi;
  }
  return sum;
}

SpaceTimeDensity make_dense_density(int k, const LatticeGrid& grid, std::vector<double> times,
                                    std::vector<cplx> field) {
  check_shape(k, grid, times);
  SpaceTimeDensity alpha;
  alpha.k = k;
  alpha.grid = grid;
  alpha.times = std::move(times);
  const std::size_t block = alpha.block_points();
  const std::size_t want = alpha.times.size() * block * block;
  if (field.size() != want) throw DomainError("dense field does not match k, grid, and times");
  require_within_budget(want * sizeof(cplx), memory_budget_bytes(), "dense space-time density");
  alpha.field = std::move(field);
  return alpha;
}

SpaceTimeDensity make_low_rank_density(int k, const LatticeGrid& grid, std::vector<double> times,
                                       std::vector<SpaceTimeDensity::Term> terms) {
  check_shape(k, grid, times);
  if (terms.empty()) throw DomainError("low-rank density needs at least one term");
  if (static_cast<int>(terms.size()) > kMaxDensityRank)
    throw DomainError("low-rank density exceeds the rank bound");
  SpaceTimeDensity alpha;
  alpha.k = k;
  alpha.grid = grid;
  alpha.times = std::move(times);
  const std::size_t block = alpha.block_points();
  for (const auto& term : terms) {
    if (term.active.size() != alpha.times.size() * block)
      throw DomainError("term active block does not match k, grid, and times");
    if (term.passive.size() != block) throw DomainError("term passive block does not match k and grid");
  }
  alpha.terms = std::move(terms);
  return alpha;
}

cplx density_value(const SpaceTimeDensity& alpha, std::size_t t, std::size_t x, std::size_t xp) {
  const std::size_t block = alpha.block_points();
  if (t >= alpha.times.size() || x >= block || xp >= block)
    throw DomainError("density index out of range");
  if (alpha.dense()) return alpha.field[(t * block + x) * block + xp];
  cplx sum(0.0, 0.0);
  for (const auto& term : alpha.terms) sum += term.coef * term.active[t * block + x] * term.passive[xp];
  return sum;
}

SpaceTimeDensity expand_density(const SpaceTimeDensity& alpha) {
  if (alpha.dense()) return alpha;
  const std::size_t block = alpha.block_points();
  const std::size_t total = alpha.times.size() * block * block;
  require_within_budget(total * sizeof(cplx), memory_budget_bytes(), "dense space-time density");
  std::vector<cplx> field(total, cplx(0.0, 0.0));
  for (const auto& term : alpha.terms) {
    for (std::size_t t = 0; t < alpha.times.size(); ++t) {
      const cplx* g = term.active.data() + t * block;
      cplx* slice = field.data() + t * block * block;
      for (std::size_t x = 0; x < block; ++x) {
        const cplx lead = term.coef * g[x];
        if (lead == cplx(0.0, 0.0)) continue;
        cplx* row = slice + x * block;
        for (std::size_t xp = 0; xp < block; ++xp) row[xp] += lead * term.passive[xp];
      }
    }
  }
  SpaceTimeDensity out;
  out.k = alpha.k;
  out.grid = alpha.grid;
  out.times = alpha.times;
  out.field = std::move(field);
  out.warnings = alpha.warnings;
  return out;
}

double st_norm(const SpaceTimeDensity& alpha) {
  const std::size_t block = alpha.block_points();
  const double dt = alpha.time_step();
  const double cell = alpha.grid.cell_volume();
  double space_weight = 1.0;
  for (int i = 0; i < 2 * alpha.k; ++i) space_weight *= cell;
  if (alpha.dense()) {
    double sum = 0.0;
    for (const cplx& v : alpha.field) sum += std::norm(v);
    return std::sqrt(sum * dt * space_weight);
  }
  const std::size_t rank = alpha.terms.size();
  double total = 0.0;
  for (std::size_t r = 0; r < rank; ++r) {
    for (std::size_t s = 0; s < rank; ++s) {
      cplx g_inner(0.0, 0.0);
      const auto& gr = alpha.terms[r].active;
      const auto& gs = alpha.terms[s].active;
      for (std::size_t i = 0; i < gr.size(); ++i) g_inner += gr[i] * std::conj(gs[i]);
      cplx h_inner(0.0, 0.0);
      const auto& hr = alpha.terms[r].passive;
      const auto& hs = alpha.terms[s].passive;
      for (std::size_t i = 0; i < block; ++i) h_inner += hr[i] * std::conj(hs[i]);
      total += std::real(alpha.terms[r].coef * std::conj(alpha.terms[s].coef) * g_inner * h_inner);
    }
  }
  return std::sqrt(std::max(0.0, total) * dt * space_weight);
}

SpaceTimeDensity lp_project(const SpaceTimeDensity& alpha, double M, LpMode mode,
                            const std::vector<int>& coords) {
  if (!is_dyadic_level(M)) throw DomainError("projector level must be a power of two, at least 1");
  if (coords.empty()) throw DomainError("projector needs at least one coordinate");
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] < 0 || coords[i] >= 2 * alpha.k)
      throw DomainError("projector coordinate out of range");
    for (std::size_t j = i + 1; j < coords.size(); ++j)
      if (coords[i] == coords[j]) throw DomainError("projector coordinates must be distinct");
  }
  SpaceTimeDensity out = alpha;
  const int d = out.grid.dimension();
  const double corner = std::sqrt(static_cast<double>(d)) * out.grid.nyquist_frequency();
  if (mode == LpMode::leq && M >= corner) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "projector level %.17g at or above the Nyquist corner: identity",
                  M);
    out.warnings.push_back(buf);
    return out;
  }
  const std::size_t block = out.block_points();
  const std::size_t time_count = out.times.size();
  if (out.dense()) {
    const int rank = 2 * out.k * d;
    for (std::size_t t = 0; t < time_count; ++t) {
      cplx* slice = out.field.data() + t * block * block;
      for (int c : coords) cutoff_coordinate(slice, rank, c * d, out.grid, M, mode);
    }
    return out;
  }
  const int rank = out.k * d;
  for (auto& term : out.terms) {
    for (int c : coords) {
      if (c < out.k) {
        for (std::size_t t = 0; t < time_count; ++t)
          cutoff_coordinate(term.active.data() + t * block, rank, c * d, out.grid, M, mode);
      } else {
        cutoff_coordinate(term.passive.data(), rank, (c - out.k) * d, out.grid, M, mode);
      }
    }
  }
  return out;
}

SpaceTimeDensity lp_project(const SpaceTimeDensity& alpha, const DyadicProjector& proj) {
  return lp_project(alpha, proj.level, proj.mode, proj.coords);
}

}  // namespace gphl
