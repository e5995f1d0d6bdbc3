#include "gphl/xb.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

#include "gphl/fft.hpp"

namespace gphl {
namespace {

double bump(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

void forward_spatial(std::vector<cplx>& field, std::size_t time_count, std::size_t block,
                     int rank, int n, bool inverse) {
  for (std::size_t t = 0; t < time_count; ++t) {
    cplx* slice = field.data() + t * block * block;
    for (int a = 0; a < rank; ++a)
      fft_axis(slice, static_cast<std::size_t>(rank), static_cast<std::size_t>(n),
               static_cast<std::size_t>(a), inverse);
  }
}

// Coordinate subindex (the d contiguous axes of coordinate c) of a flat
// k-coordinate block index.
std::size_t coordinate_sub(std::size_t flat, int k, int c, std::size_t coord_points) {
  std::size_t stride = 1;
  for (int i = c + 1; i < k; ++i) stride *= coord_points;
  return (flat / stride) % coord_points;
}

// Index map of a shear on the first two or three coordinates. `signs[i][j]`
// adds coordinate j into coordinate i; forward uses +1, inverse -1.
std::vector<std::size_t> shear_permutation(const LatticeGrid& grid, int k, Shear which,
                                           int direction) {
  const int d = grid.dimension();
  const int n = grid.points_per_axis();
  const std::size_t block = grid.total_points(k * d);
  std::vector<std::size_t> perm(block);
  std::vector<int> idx(static_cast<std::size_t>(k) * d);
  std::vector<int> mapped(idx.size());
  for (std::size_t flat = 0; flat < block; ++flat) {
    std::size_t rest = flat;
    for (int a = k * d - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rest % n);
      rest /= n;
    }
    mapped = idx;
    auto add = [&](int dst, int src) {
      for (int a = 0; a < d; ++a) {
        int v = mapped[dst * d + a] + direction * idx[src * d + a];
        mapped[dst * d + a] = ((v % n) + n) % n;
      }
    };
    switch (which) {
      case Shear::T1: add(0, 1); break;
      case Shear::T2: add(1, 0); break;
      case Shear::T12:
        add(0, 2);
        add(1, 2);
        break;
      case Shear::T23:
        add(1, 0);
        add(2, 0);
        break;
      case Shear::T13:
        add(0, 1);
        add(2, 1);
        break;
    }
    std::size_t out = 0;
    for (int a = 0; a < k * d; ++a) out = out * n + static_cast<std::size_t>(mapped[a]);
    perm[flat] = out;
  }
  return perm;
}

SpaceTimeDensity apply_shear(const SpaceTimeDensity& alpha, Shear which, int direction) {
  const int need = (which == Shear::T1 || which == Shear::T2) ? 2 : 3;
  if (alpha.k < need) throw DomainError("shear needs more coordinates than the density order");
  SpaceTimeDensity out = alpha;
  const std::size_t block = alpha.block_points();
  const auto perm = shear_permutation(alpha.grid, alpha.k, which, direction);
  if (out.dense()) {
    for (std::size_t t = 0; t < out.times.size(); ++t) {
      const cplx* src = alpha.field.data() + t * block * block;
      cplx* dst = out.field.data() + t * block * block;
      for (std::size_t x = 0; x < block; ++x) {
        const cplx* row = src + perm[x] * block;
        cplx* out_row = dst + x * block;
        for (std::size_t xp = 0; xp < block; ++xp) out_row[xp] = row[xp];
      }
    }
    return out;
  }
  for (std::size_t r = 0; r < out.terms.size(); ++r) {
    const auto& src = alpha.terms[r].active;
    auto& dst = out.terms[r].active;
    for (std::size_t t = 0; t < out.times.size(); ++t)
      for (std::size_t x = 0; x < block; ++x) dst[t * block + x] = src[t * block + perm[x]];
  }
  return out;
}

}  // namespace

double time_cutoff(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  if (s >= 0.25 && s <= 0.75) return 1.0;
  const double edge = s < 0.25 ? s : 1.0 - s;
  const double u = edge / 0.25;
  return bump(u) / (bump(u) + bump(1.0 - u));
}

SpaceTimeDensity apply_time_cutoff(const SpaceTimeDensity& alpha) {
  SpaceTimeDensity out = alpha;
  const double span = out.times.back() - out.times.front();
  const std::size_t block = out.block_points();
  for (std::size_t t = 0; t < out.times.size(); ++t) {
    const double w = time_cutoff((out.times[t] - out.times.front()) / span);
    if (out.dense()) {
      cplx* slice = out.field.data() + t * block * block;
      for (std::size_t i = 0; i < block * block; ++i) slice[i] *= w;
    } else {
      for (auto& term : out.terms) {
        cplx* slice = term.active.data() + t * block;
        for (std::size_t i = 0; i < block; ++i) slice[i] *= w;
      }
    }
  }
  return out;
}

double xb_norm(const SpaceTimeDensity& alpha, double b) {
  SpaceTimeDensity expanded;
  if (!alpha.dense()) expanded = expand_density(alpha);
  const SpaceTimeDensity& dense = alpha.dense() ? alpha : expanded;
  const std::size_t time_count = dense.times.size();
  if (!is_power_of_two(time_count))
    throw DomainError("time sample count must be a power of two for the space-time transform");
  const int d = dense.grid.dimension();
  const int rank = 2 * dense.k * d;
  const int n = dense.grid.points_per_axis();
  const std::size_t block = dense.block_points();
  const std::size_t spatial = block * block;
  std::vector<cplx> hat = dense.field;
  forward_spatial(hat, time_count, block, rank, n, false);
  std::vector<cplx> line(time_count);
  for (std::size_t s = 0; s < spatial; ++s) {
    for (std::size_t t = 0; t < time_count; ++t) line[t] = hat[t * spatial + s];
    fft_inplace(line.data(), time_count, false);
    for (std::size_t t = 0; t < time_count; ++t) hat[t * spatial + s] = line[t];
  }
  // Dispersive offset |xi_k|^2 - |xi_k'|^2 per spatial mode.
  std::vector<double> offset(spatial);
  for (std::size_t s = 0; s < spatial; ++s) {
    double v = 0.0;
    for (int c = 0; c < 2 * dense.k; ++c) {
      double fsq = coordinate_frequency_sq(dense.grid, s, rank, c * d);
      v += c < dense.k ? fsq : -fsq;
    }
    offset[s] = v;
  }
  const double dt = dense.time_step();
  const double window = dt * static_cast<double>(time_count);
  double sum = 0.0;
  for (std::size_t t = 0; t < time_count; ++t) {
    const int mode = t < time_count / 2 ? static_cast<int>(t)
                                        : static_cast<int>(t) - static_cast<int>(time_count);
    const double tau = 2.0 * kPi * mode / window;
    const cplx* slice = hat.data() + t * spatial;
    for (std::size_t s = 0; s < spatial; ++s) {
      const double u = tau + offset[s];
      sum += std::pow(1.0 + u * u, b) * std::norm(slice[s]);
    }
  }
  double space_weight = 1.0;
  for (int i = 0; i < 2 * dense.k; ++i) space_weight *= dense.grid.cell_volume();
  const double scale = dt * space_weight / (static_cast<double>(time_count) * static_cast<double>(spatial));
  return std::sqrt(sum * scale);
}

SpaceTimeDensity shear(const SpaceTimeDensity& alpha, Shear which) {
  return apply_shear(alpha, which, +1);
}

SpaceTimeDensity shear_inverse(const SpaceTimeDensity& alpha, Shear which) {
  return apply_shear(alpha, which, -1);
}

CollapseResult collapsing_apply(const SpaceTimeDensity& gamma_kplus1, int j, CollapseSide side) {
  if (gamma_kplus1.k < 2) throw DomainError("collapse needs a density of order at least 2");
  const int k = gamma_kplus1.k - 1;
  if (j < 1 || j > k) throw DomainError("collapse index j must lie in [1, k]");
  if (gamma_kplus1.grid.points_per_axis() < 8)
    throw DomainError("collapse needs at least 8 points per axis");
  SpaceTimeDensity expanded;
  if (!gamma_kplus1.dense()) expanded = expand_density(gamma_kplus1);
  const SpaceTimeDensity& in = gamma_kplus1.dense() ? gamma_kplus1 : expanded;
  const LatticeGrid& grid = in.grid;
  const int d = grid.dimension();
  const int n = grid.points_per_axis();
  const std::size_t coord_points = grid.total_points(d);
  const std::size_t block_in = in.block_points();
  const std::size_t block_out = grid.total_points(k * d);
  const std::size_t time_count = in.times.size();
  require_within_budget(time_count * block_out * block_out * sizeof(cplx), memory_budget_bytes(),
                        "collapsed density");
  std::vector<cplx> out(time_count * block_out * block_out);
  const bool want_plus = side != CollapseSide::minus;
  const bool want_minus = side != CollapseSide::plus;
  for (std::size_t t = 0; t < time_count; ++t) {
    const cplx* src = in.field.data() + t * block_in * block_in;
    cplx* dst = out.data() + t * block_out * block_out;
    for (std::size_t x = 0; x < block_out; ++x) {
      const std::size_t yx = coordinate_sub(x, k, j - 1, coord_points);
      for (std::size_t xp = 0; xp < block_out; ++xp) {
        const std::size_t yp = coordinate_sub(xp, k, j - 1, coord_points);
        cplx v(0.0, 0.0);
        if (want_plus) v += src[(x * coord_points + yx) * block_in + xp * coord_points + yx];
        if (want_minus) {
          const cplx at_primed = src[(x * coord_points + yp) * block_in + xp * coord_points + yp];
          v += side == CollapseSide::minus ? at_primed : -at_primed;
        }
        dst[x * block_out + xp] = v;
      }
    }
  }
  // |xi_i| |xi_i'| multipliers on every surviving coordinate.
  const int rank = 2 * k * d;
  for (std::size_t t = 0; t < time_count; ++t) {
    cplx* slice = out.data() + t * block_out * block_out;
    for (int a = 0; a < rank; ++a)
      fft_axis(slice, static_cast<std::size_t>(rank), static_cast<std::size_t>(n),
               static_cast<std::size_t>(a), false);
    for (std::size_t s = 0; s < block_out * block_out; ++s) {
      double m = 1.0;
      for (int c = 0; c < 2 * k; ++c)
        m *= std::sqrt(coordinate_frequency_sq(grid, s, rank, c * d));
      slice[s] *= m;
    }
    for (int a = 0; a < rank; ++a)
      fft_axis(slice, static_cast<std::size_t>(rank), static_cast<std::size_t>(n),
               static_cast<std::size_t>(a), true);
  }
  CollapseResult result;
  result.field = make_dense_density(k, grid, in.times, std::move(out));
  result.field.warnings = in.warnings;
  double space_weight = 1.0;
  for (int i = 0; i < 2 * k; ++i) space_weight *= grid.cell_volume();
  const double dt = result.field.time_step();
  double integral = 0.0;
  for (std::size_t t = 0; t < time_count; ++t) {
    const cplx* slice = result.field.field.data() + t * block_out * block_out;
    double sq = 0.0;
    for (std::size_t s = 0; s < block_out * block_out; ++s) sq += std::norm(slice[s]);
    const double slice_norm = std::sqrt(sq * space_weight);
    const double w = (t == 0 || t + 1 == time_count) ? 0.5 : 1.0;
    integral += w * slice_norm;
  }
  result.l1t_l2_norm = integral * dt;
  return result;
}

}  // namespace gphl
