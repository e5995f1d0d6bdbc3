#include "gphl/dressing.hpp"

#include <cmath>
#include <cstdio>

namespace gphl {

namespace {

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  while (e-- > 0) r *= base;
  return r;
}

// Distance of the grid point with flat index f to the origin, min-image.
double difference_distance(const LatticeGrid& grid, std::size_t f) {
  int d = grid.dimension();
  std::vector<int> idx(static_cast<std::size_t>(d));
  grid.unflatten(f, d, idx);
  double r2 = 0.0;
  for (int c = 0; c < d; ++c) {
    double delta = grid.min_image(grid.position(idx[static_cast<std::size_t>(c)]));
    r2 += delta * delta;
  }
  return std::sqrt(r2);
}

}  // namespace

double DressedMarginal::config_volume() const {
  double v = 1.0;
  for (int a = 0; a < k * grid.dimension(); ++a) v *= grid.spacing();
  return v;
}

std::vector<double> pair_correlation_table(const LatticeGrid& grid, const ScaledPotential& sp) {
  if (grid.dimension() != sp.dimension())
    throw DomainError("grid and scaled potential dimensions differ");
  std::size_t block = grid.total_points(grid.dimension());
  std::vector<double> w(block);
  for (std::size_t f = 0; f < block; ++f) {
    double r = difference_distance(grid, f);
    w[f] = sp.wN(r);
    if (1.0 - w[f] < 1e-6) {
      char msg[160];
      std::snprintf(msg, sizeof msg, "dressing singular: 1 - w_N = %.6g at pair distance %.6g",
                    1.0 - w[f], r);
      throw DomainError(msg);
    }
  }
  return w;
}

Eigen::VectorXd dressing_field(const LatticeGrid& grid, const ScaledPotential& sp, int k) {
  if (k < 1) throw DomainError("dressing order must be at least 1");
  std::vector<double> w = pair_correlation_table(grid, sp);
  int d = grid.dimension();
  int n = grid.points_per_axis();
  std::size_t block = grid.total_points(d);
  std::size_t configs = ipow(block, k);
  Eigen::VectorXd G(static_cast<Eigen::Index>(configs));
  std::vector<int> idx(static_cast<std::size_t>(k * d));
  std::vector<std::size_t> axis_scale(static_cast<std::size_t>(d));
  for (int c = 0; c < d; ++c) axis_scale[static_cast<std::size_t>(c)] = ipow(n, d - 1 - c);
  for (std::size_t f = 0; f < configs; ++f) {
    grid.unflatten(f, k * d, idx);
    double g = 1.0;
    for (int p = 0; p < k; ++p)
      for (int q = p + 1; q < k; ++q) {
        std::size_t diff = 0;
        for (int c = 0; c < d; ++c) {
          int delta = idx[static_cast<std::size_t>(p * d + c)] -
                      idx[static_cast<std::size_t>(q * d + c)];
          diff += static_cast<std::size_t>((delta + n) % n) * axis_scale[static_cast<std::size_t>(c)];
        }
        g *= 1.0 - w[diff];
      }
    G[static_cast<Eigen::Index>(f)] = g;
  }
  return G;
}

DressedMarginal dress(const MarginalKernel& gamma, const ScaledPotential& sp) {
  DressedMarginal out;
  out.k = gamma.k;
  out.grid = gamma.grid;
  out.dressing = dressing_field(gamma.grid, sp, gamma.k);
  Eigen::Index m = gamma.ker.rows();
  out.alpha.resize(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b)
      out.alpha(a, b) = gamma.ker(a, b) / (out.dressing[a] * out.dressing[b]);
  return out;
}

MarginalKernel undress(const DressedMarginal& alpha) {
  MarginalKernel out;
  out.k = alpha.k;
  out.grid = alpha.grid;
  Eigen::Index m = alpha.alpha.rows();
  out.ker.resize(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b)
      out.ker(a, b) = alpha.alpha(a, b) * (alpha.dressing[a] * alpha.dressing[b]);
  return out;
}

double DressingGap::bound(int k) const {
  return std::pow(1.0 + gap, static_cast<double>(k) * (k - 1)) - 1.0;
}

DressingGap dressing_gap(const ScaledPotential& sp, const LatticeGrid& grid) {
  std::vector<double> w = pair_correlation_table(grid, sp);
  DressingGap out;
  for (double wi : w) out.gap = std::max(out.gap, std::abs(wi / (1.0 - wi)));
  return out;
}

}  // namespace gphl
