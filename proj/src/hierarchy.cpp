#include "gphl/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gphl/fft.hpp"

namespace gphl {

namespace {

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  while (e-- > 0) r *= base;
  return r;
}

struct ParticlePair {
  int a, b;  // zero-based, a < b
};

std::vector<ParticlePair> all_pairs(int k) {
  std::vector<ParticlePair> pairs;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) pairs.push_back({a, b});
  return pairs;
}

// Per-pair data at one configuration: value, gradient with respect to the
// first member, and Laplacian of the pair profile.
struct PairData {
  double g = 1.0;
  Eigen::Vector3d grad = Eigen::Vector3d::Zero();  // d/dx_a g(x_a - x_b)
  double lap = 0.0;
};

std::vector<PairData> evaluate_pairs(const PairProfile& g, const std::vector<ParticlePair>& pairs,
                                     const Config3& cfg) {
  std::vector<PairData> out(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    Eigen::Vector3d diff = cfg[static_cast<std::size_t>(pairs[p].a)] -
                           cfg[static_cast<std::size_t>(pairs[p].b)];
    out[p].g = g.value(diff);
    out[p].grad = g.gradient(diff);
    out[p].lap = g.laplacian(diff);
  }
  return out;
}

// d/dx_l of the pair factor: +grad for the first member, -grad for the second.
Eigen::Vector3d grad_for(const PairData& pd, const ParticlePair& pair, int l) {
  return pair.a == l ? pd.grad : Eigen::Vector3d(-pd.grad);
}

// sum_l Delta_l prod g by the literal product rule: every monomial keeps its
// own partial product, no division by the full product.
double laplacian_sum_expanded(const std::vector<ParticlePair>& pairs,
                              const std::vector<PairData>& pd, int k, double* term_scale) {
  double total = 0.0;
  for (int l = 0; l < k; ++l) {
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      if (pairs[p].a != l && pairs[p].b != l) continue;
      double partial = pd[p].lap;
      for (std::size_t q = 0; q < pairs.size(); ++q)
        if (q != p) partial *= pd[q].g;
      total += partial;
      *term_scale = std::max(*term_scale, std::abs(partial));
      for (std::size_t q = p + 1; q < pairs.size(); ++q) {
        if (pairs[q].a != l && pairs[q].b != l) continue;
        double dot = grad_for(pd[p], pairs[p], l).dot(grad_for(pd[q], pairs[q], l));
        double cross = 2.0 * dot;
        for (std::size_t r = 0; r < pairs.size(); ++r)
          if (r != p && r != q) cross *= pd[r].g;
        total += cross;
        *term_scale = std::max(*term_scale, std::abs(cross));
      }
    }
  }
  return total;
}

double full_product(const std::vector<PairData>& pd) {
  double g = 1.0;
  for (const PairData& d : pd) g *= d.g;
  return g;
}

}  // namespace

PairProfile dressing_profile(const ScaledPotential& sp) {
  PairProfile p;
  p.value = [sp](const Eigen::Vector3d& x) { return sp.dressing(x.norm()); };
  p.gradient = [sp](const Eigen::Vector3d& x) -> Eigen::Vector3d {
    double r = x.norm();
    if (r < 1e-14) return Eigen::Vector3d::Zero();
    return sp.dressing_radial_derivative(r) * (x / r);
  };
  p.laplacian = [sp](const Eigen::Vector3d& x) { return sp.dressing_laplacian(x.norm()); };
  return p;
}

PairProfile generic_profile() {
  PairProfile p;
  p.value = [](const Eigen::Vector3d& x) { return 1.0 - 0.3 * std::exp(-x.squaredNorm()); };
  p.gradient = [](const Eigen::Vector3d& x) -> Eigen::Vector3d {
    return 0.6 * std::exp(-x.squaredNorm()) * x;
  };
  p.laplacian = [](const Eigen::Vector3d& x) {
    double r2 = x.squaredNorm();
    return 0.6 * std::exp(-r2) * (3.0 - 2.0 * r2);
  };
  return p;
}

double leibniz_identity_residual(const PairProfile& g, int k,
                                 const std::vector<Config3>& configs) {
  if (k < 2) throw DomainError("identity needs at least 2 particles");
  std::vector<ParticlePair> pairs = all_pairs(k);
  double worst = 0.0;
  for (const Config3& cfg : configs) {
    if (static_cast<int>(cfg.size()) != k) throw DomainError("configuration size mismatch");
    std::vector<PairData> pd = evaluate_pairs(g, pairs, cfg);
    double term_scale = 0.0;
    double lhs = laplacian_sum_expanded(pairs, pd, k, &term_scale);
    double G = full_product(pd);
    double ratio_sum = 0.0;
    for (int l = 0; l < k; ++l)
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        if (pairs[p].a != l && pairs[p].b != l) continue;
        ratio_sum += pd[p].lap / pd[p].g;
        for (std::size_t q = p + 1; q < pairs.size(); ++q) {
          if (pairs[q].a != l && pairs[q].b != l) continue;
          ratio_sum += 2.0 * grad_for(pd[p], pairs[p], l).dot(grad_for(pd[q], pairs[q], l)) /
                       (pd[p].g * pd[q].g);
        }
      }
    double rhs = G * ratio_sum;
    term_scale = std::max({term_scale, std::abs(lhs), std::abs(rhs)});
    // Floor at the smallest normal double: configurations whose every term
    // has underflowed carry no resolvable information.
    worst = std::max(worst, std::abs(lhs - rhs) /
                                std::max(term_scale, std::numeric_limits<double>::min()));
  }
  return worst;
}

double wave_operator_identity_residual(const ScaledPotential& sp, int k,
                                       const std::vector<Config3>& configs) {
  if (k < 2) throw DomainError("identity needs at least 2 particles");
  std::vector<ParticlePair> pairs = all_pairs(k);
  PairProfile prof = dressing_profile(sp);
  double worst = 0.0;
  for (const Config3& cfg : configs) {
    if (static_cast<int>(cfg.size()) != k) throw DomainError("configuration size mismatch");
    std::vector<PairData> pd = evaluate_pairs(prof, pairs, cfg);
    double term_scale = 0.0;
    // H G = -sum_l Delta_l G + (1/N) sum_pairs V_N G, with Delta of each pair
    // factor supplied by the zero-energy equation.
    double lhs = -laplacian_sum_expanded(pairs, pd, k, &term_scale);
    double G = full_product(pd);
    double pot = 0.0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      Eigen::Vector3d diff = cfg[static_cast<std::size_t>(pairs[p].a)] -
                             cfg[static_cast<std::size_t>(pairs[p].b)];
      pot += sp.VN(diff.norm());
    }
    lhs += pot / sp.N() * G;
    term_scale = std::max(term_scale, std::abs(pot / sp.N() * G));
    // Grouped form: -2 G sum over l and pairs i<j avoiding l of the
    // normalized gradient couplings.
    double coupling = 0.0;
    for (int l = 0; l < k; ++l)
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        if (pairs[p].a != l && pairs[p].b != l) continue;
        for (std::size_t q = p + 1; q < pairs.size(); ++q) {
          if (pairs[q].a != l && pairs[q].b != l) continue;
          coupling += grad_for(pd[p], pairs[p], l).dot(grad_for(pd[q], pairs[q], l)) /
                      (pd[p].g * pd[q].g);
        }
      }
    double rhs = -2.0 * G * coupling;
    term_scale = std::max({term_scale, std::abs(lhs), std::abs(rhs)});
    worst = std::max(worst, std::abs(lhs - rhs) /
                                std::max(term_scale, std::numeric_limits<double>::min()));
  }
  double generic = leibniz_identity_residual(generic_profile(), k, configs);
  return std::max(worst, generic);
}

std::vector<Config3> sample_identity_configs(const ScaledPotential& sp, int k, int count,
                                             unsigned seed, double margin, int* resampled) {
  double scale = sp.base().support_radius() / sp.scale();
  if (!(scale > 0.0)) scale = 1.0;
  double half_width = 2.0 * scale;
  double shell = sp.base().kind() == PotentialKind::SquareBarrier
                     ? sp.base().param_b() / sp.scale()
                     : -1.0;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coord(-half_width, half_width);
  std::vector<Config3> out;
  out.reserve(static_cast<std::size_t>(count));
  int rejects = 0;
  long attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > 10000L * count)
      throw NumericalError("configuration sampling rejects nearly everything");
    Config3 cfg(static_cast<std::size_t>(k));
    for (auto& x : cfg) x = Eigen::Vector3d(coord(rng), coord(rng), coord(rng));
    bool ok = true;
    if (shell > 0.0)
      for (int a = 0; a < k && ok; ++a)
        for (int b = a + 1; b < k && ok; ++b)
          if (std::abs((cfg[static_cast<std::size_t>(a)] - cfg[static_cast<std::size_t>(b)])
                           .norm() -
                       shell) < margin)
            ok = false;
    if (!ok) {
      ++rejects;
      continue;
    }
    out.push_back(std::move(cfg));
  }
  if (resampled) *resampled = rejects;
  return out;
}

double a_multiplier(const ScaledPotential& sp, const Eigen::Vector3d& xl,
                    const Eigen::Vector3d& xi, const Eigen::Vector3d& xj) {
  PairProfile prof = dressing_profile(sp);
  Eigen::Vector3d di = xl - xi, dj = xl - xj;
  return -prof.gradient(di).dot(prof.gradient(dj)) / (prof.value(di) * prof.value(dj));
}

double collapse_split_residual(const ScaledPotential& sp, int k, int quad_per_axis,
                               int config_count, unsigned seed) {
  if (k < 1) throw DomainError("collapse order must be at least 1");
  if (quad_per_axis < 2) throw DomainError("need at least 2 quadrature points per axis");
  double scale = sp.base().support_radius() / sp.scale();
  if (!(scale > 0.0)) scale = 1.0;
  double half_width = 2.0 * scale;
  double y_half = 3.0 * scale;
  double y_weight = std::pow(2.0 * y_half / quad_per_axis, 3);
  std::vector<Eigen::Vector3d> nodes;
  nodes.reserve(static_cast<std::size_t>(quad_per_axis * quad_per_axis * quad_per_axis));
  for (int a = 0; a < quad_per_axis; ++a)
    for (int b = 0; b < quad_per_axis; ++b)
      for (int c = 0; c < quad_per_axis; ++c)
        nodes.emplace_back(-y_half + (a + 0.5) * 2.0 * y_half / quad_per_axis,
                           -y_half + (b + 0.5) * 2.0 * y_half / quad_per_axis,
                           -y_half + (c + 0.5) * 2.0 * y_half / quad_per_axis);

  std::vector<ParticlePair> base_pairs = all_pairs(k);
  std::vector<std::vector<LMonomial>> monomials;
  for (int l = 1; l <= k; ++l) monomials.push_back(expand_L(k, l));

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coord(-half_width, half_width);
  std::uniform_real_distribution<double> freq(-1.5 / scale, 1.5 / scale);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  double prefac = (sp.N() - k) / sp.N();
  auto g_of = [&sp](const Eigen::Vector3d& v) { return sp.dressing(v.norm()); };
  auto w_of = [&sp](const Eigen::Vector3d& v) { return sp.wN(v.norm()); };

  double worst = 0.0;
  for (int cfg_i = 0; cfg_i < config_count; ++cfg_i) {
    std::vector<Eigen::Vector3d> x(static_cast<std::size_t>(k)), xp(static_cast<std::size_t>(k));
    for (auto& v : x) v = Eigen::Vector3d(coord(rng), coord(rng), coord(rng));
    for (auto& v : xp) v = Eigen::Vector3d(coord(rng), coord(rng), coord(rng));

    // Random smooth kernel section alpha(x_k, y; x_k', y): a short Fourier
    // sum; only its values at the quadrature nodes enter.
    const int modes = 4;
    std::vector<cplx> coeff(modes);
    std::vector<Eigen::Vector3d> wave_y(modes);
    std::vector<double> base_phase(modes);
    for (int m = 0; m < modes; ++m) {
      coeff[m] = std::polar(1.0, phase(rng));
      wave_y[m] = Eigen::Vector3d(freq(rng), freq(rng), freq(rng));
      double ph = 0.0;
      for (int j = 0; j < k; ++j) {
        Eigen::Vector3d pj(freq(rng), freq(rng), freq(rng));
        Eigen::Vector3d qj(freq(rng), freq(rng), freq(rng));
        ph += pj.dot(x[static_cast<std::size_t>(j)]) + qj.dot(xp[static_cast<std::size_t>(j)]);
      }
      base_phase[m] = ph;
    }
    auto alpha_at = [&](const Eigen::Vector3d& y) {
      cplx v(0.0, 0.0);
      for (int m = 0; m < modes; ++m)
        v += coeff[m] * std::polar(1.0, base_phase[m] + wave_y[m].dot(y));
      return v;
    };

    // Dressing products over the k-particle configurations alone.
    double Gk = 1.0, Gkp = 1.0;
    for (const ParticlePair& p : base_pairs) {
      Gk *= g_of(x[static_cast<std::size_t>(p.a)] - x[static_cast<std::size_t>(p.b)]);
      Gkp *= g_of(xp[static_cast<std::size_t>(p.a)] - xp[static_cast<std::size_t>(p.b)]);
    }

    for (int l = 1; l <= k; ++l) {
      cplx direct(0.0, 0.0), split(0.0, 0.0);
      double mass = 0.0;
      for (const Eigen::Vector3d& y : nodes) {
        cplx av = alpha_at(y);
        double dvl = sp.VN((x[static_cast<std::size_t>(l - 1)] - y).norm()) -
                     sp.VN((xp[static_cast<std::size_t>(l - 1)] - y).norm());
        // Direct conjugation: full (k+1)-particle dressing products divided
        // by the k-particle ones after the contraction.
        double Gfull = Gk * Gkp;
        for (int j = 0; j < k; ++j)
          Gfull *= g_of(x[static_cast<std::size_t>(j)] - y) *
                   g_of(xp[static_cast<std::size_t>(j)] - y);
        direct += y_weight * dvl * Gfull * av;
        mass += y_weight * std::abs(dvl) * Gfull * std::abs(av);

        // Screened route: tilde potential plus the localization monomials.
        auto w_unprimed_row = [&](const LFactor& f) {
          return f.primed ? w_of(xp[static_cast<std::size_t>(f.j - 1)] - y)
                          : w_of(x[static_cast<std::size_t>(f.j - 1)] - y);
        };
        auto w_primed_row = [&](const LFactor& f) {
          return f.primed ? w_of(x[static_cast<std::size_t>(f.j - 1)] - y)
                          : w_of(xp[static_cast<std::size_t>(f.j - 1)] - y);
        };
        double Ll = evaluate_L(monomials[static_cast<std::size_t>(l - 1)], w_unprimed_row);
        double Llp = evaluate_L(monomials[static_cast<std::size_t>(l - 1)], w_primed_row);
        double vt = sp.VN_tilde((x[static_cast<std::size_t>(l - 1)] - y).norm());
        double vtp = sp.VN_tilde((xp[static_cast<std::size_t>(l - 1)] - y).norm());
        split += y_weight * (vt * (1.0 + Ll) - vtp * (1.0 + Llp)) * av;
      }
      cplx lhs = prefac * direct / (Gk * Gkp);
      cplx rhs = prefac * split;
      double denom = std::max(prefac * mass / (Gk * Gkp), 1e-300);
      worst = std::max(worst, std::abs(lhs - rhs) / denom);
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Grid layer.

namespace {

// Geometry of the pair-difference lattice: distance and min-image
// displacement for every difference flat index.
struct DifferenceTable {
  int n = 0, d = 0;
  std::vector<std::size_t> axis_scale;   // n^{d-1-c}
  std::vector<double> dist;              // |delta| per difference index
  std::vector<double> disp;              // d components per difference index

  explicit DifferenceTable(const LatticeGrid& grid) {
    n = grid.points_per_axis();
    d = grid.dimension();
    std::size_t block = grid.total_points(d);
    axis_scale.resize(static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c) axis_scale[static_cast<std::size_t>(c)] = ipow(n, d - 1 - c);
    dist.resize(block);
    disp.resize(block * static_cast<std::size_t>(d));
    std::vector<int> idx;
    for (std::size_t f = 0; f < block; ++f) {
      grid.unflatten(f, d, idx);
      double r2 = 0.0;
      for (int c = 0; c < d; ++c) {
        double delta = grid.min_image(grid.position(idx[static_cast<std::size_t>(c)]));
        disp[f * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)] = delta;
        r2 += delta * delta;
      }
      dist[f] = std::sqrt(r2);
    }
  }

  std::size_t diff_flat(std::size_t ia, std::size_t ib) const {
    std::size_t f = 0;
    for (int c = 0; c < d; ++c) {
      std::size_t s = axis_scale[static_cast<std::size_t>(c)];
      int da = static_cast<int>(ia / s) % n;
      int db = static_cast<int>(ib / s) % n;
      f += static_cast<std::size_t>((da - db + n) % n) * s;
    }
    return f;
  }
};

// Single-particle flat index of particle p (zero-based) inside a k-particle
// row index.
std::size_t particle_digit(std::size_t row, int p, int k, std::size_t block) {
  return (row / ipow(block, k - 1 - p)) % block;
}

void check_indices(int k, std::initializer_list<int> indices) {
  for (int i : indices)
    if (i < 1 || i > k) throw DomainError("particle index out of range");
}

}  // namespace

DressedMarginal apply_A(const DressedMarginal& alpha, int i, int j, int l,
                        const ScaledPotential& sp) {
  int k = alpha.k;
  check_indices(k, {i, j, l});
  if (i == j || i == l || j == l) throw DomainError("particle indices must be distinct");
  const LatticeGrid& grid = alpha.grid;
  std::vector<double> w = pair_correlation_table(grid, sp);
  DifferenceTable geom(grid);
  std::size_t block = grid.total_points(grid.dimension());
  std::vector<double> gp(block);
  for (std::size_t f = 0; f < block; ++f)
    gp[f] = sp.dressing_radial_derivative(geom.dist[f]);

  DressedMarginal out;
  out.k = k;
  out.grid = grid;
  out.dressing = alpha.dressing;
  out.alpha.resize(alpha.alpha.rows(), alpha.alpha.cols());
  std::size_t rows = alpha.rows();
  int d = grid.dimension();
  for (std::size_t a = 0; a < rows; ++a) {
    std::size_t pl = particle_digit(a, l - 1, k, block);
    std::size_t fi = geom.diff_flat(pl, particle_digit(a, i - 1, k, block));
    std::size_t fj = geom.diff_flat(pl, particle_digit(a, j - 1, k, block));
    double mult = 0.0;
    if (geom.dist[fi] > 0.0 && geom.dist[fj] > 0.0) {
      double dot = 0.0;
      for (int c = 0; c < d; ++c)
        dot += geom.disp[fi * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)] *
               geom.disp[fj * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)];
      mult = -(gp[fi] / geom.dist[fi]) * (gp[fj] / geom.dist[fj]) * dot /
             ((1.0 - w[fi]) * (1.0 - w[fj]));
    }
    out.alpha.row(static_cast<Eigen::Index>(a)) =
        alpha.alpha.row(static_cast<Eigen::Index>(a)) * mult;
  }
  return out;
}

DressedMarginal apply_E(const DressedMarginal& alpha, int j, int l, const ScaledPotential& sp) {
  int k = alpha.k;
  check_indices(k, {j, l});
  if (j == l) throw DomainError("particle indices must be distinct");
  const LatticeGrid& grid = alpha.grid;
  std::vector<double> w = pair_correlation_table(grid, sp);
  DifferenceTable geom(grid);
  std::size_t block = grid.total_points(grid.dimension());
  std::vector<double> gp(block);
  for (std::size_t f = 0; f < block; ++f)
    gp[f] = sp.dressing_radial_derivative(geom.dist[f]);

  int d = grid.dimension();
  int n = grid.points_per_axis();
  std::size_t rank = static_cast<std::size_t>(2 * k * d);
  std::size_t rows = alpha.rows();
  DressedMarginal out;
  out.k = k;
  out.grid = grid;
  out.dressing = alpha.dressing;
  out.alpha = KernelMatrix::Zero(alpha.alpha.rows(), alpha.alpha.cols());

  KernelMatrix work(alpha.alpha.rows(), alpha.alpha.cols());
  std::size_t total = rows * rows;
  for (int c = 0; c < d; ++c) {
    work = alpha.alpha;
    std::size_t axis = static_cast<std::size_t>((l - 1) * d + c);
    fft_axis(work.data(), rank, static_cast<std::size_t>(n), axis, false);
    std::size_t stride = ipow(n, static_cast<int>(rank - 1 - axis));
    cplx* buf = work.data();
    for (std::size_t f = 0; f < total; ++f) {
      int digit = static_cast<int>((f / stride) % static_cast<std::size_t>(n));
      buf[f] *= cplx(0.0, grid.frequency(digit));
    }
    fft_axis(work.data(), rank, static_cast<std::size_t>(n), axis, true);
    for (std::size_t a = 0; a < rows; ++a) {
      std::size_t fj =
          geom.diff_flat(particle_digit(a, l - 1, k, block), particle_digit(a, j - 1, k, block));
      double mult = 0.0;
      if (geom.dist[fj] > 0.0)
        mult = 2.0 * (gp[fj] / geom.dist[fj]) *
               geom.disp[fj * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)] /
               (1.0 - w[fj]);
      out.alpha.row(static_cast<Eigen::Index>(a)) +=
          work.row(static_cast<Eigen::Index>(a)) * mult;
    }
  }
  return out;
}

MarginalKernel apply_B_collapse(const MarginalKernel& alpha_kplus1, int l,
                                const ScaledPotential& sp, CollapseVariant variant) {
  int k = alpha_kplus1.k - 1;
  if (k < 1) throw DomainError("collapse needs a kernel of order at least 2");
  check_indices(k, {l});
  const LatticeGrid& grid = alpha_kplus1.grid;
  std::size_t block = grid.total_points(grid.dimension());
  std::size_t rows_in = alpha_kplus1.rows();
  if (rows_in != ipow(block, k + 1)) throw DomainError("kernel size does not match its order");
  std::size_t rows = ipow(block, k);
  require_within_budget(rows * rows * sizeof(cplx), memory_budget_bytes(), "collapsed kernel");

  DifferenceTable geom(grid);
  std::vector<double> w = pair_correlation_table(grid, sp);
  std::vector<double> vn(block), vt(block);
  for (std::size_t f = 0; f < block; ++f) {
    vn[f] = sp.VN(geom.dist[f]);
    vt[f] = vn[f] * (1.0 - w[f]);
  }
  const std::vector<double>& pot = variant == CollapseVariant::plain ? vn : vt;
  std::vector<LMonomial> monomials;
  if (variant == CollapseVariant::many) monomials = expand_L(k, l);

  MarginalKernel out;
  out.k = k;
  out.grid = grid;
  out.ker.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
  double prefac = (sp.N() - k) / sp.N() * grid.cell_volume();

  std::vector<std::size_t> digits(rows * static_cast<std::size_t>(k));
  for (std::size_t a = 0; a < rows; ++a)
    for (int p = 0; p < k; ++p)
      digits[a * static_cast<std::size_t>(k) + static_cast<std::size_t>(p)] =
          particle_digit(a, p, k, block);

  for (std::size_t a = 0; a < rows; ++a) {
    std::size_t la = digits[a * static_cast<std::size_t>(k) + static_cast<std::size_t>(l - 1)];
    for (std::size_t b = 0; b < rows; ++b) {
      std::size_t lb = digits[b * static_cast<std::size_t>(k) + static_cast<std::size_t>(l - 1)];
      cplx acc(0.0, 0.0);
      for (std::size_t y = 0; y < block; ++y) {
        cplx kv = alpha_kplus1.ker(static_cast<Eigen::Index>(a * block + y),
                                   static_cast<Eigen::Index>(b * block + y));
        if (variant == CollapseVariant::many) {
          auto w_row = [&](const LFactor& f) {
            std::size_t base = f.primed ? digits[b * static_cast<std::size_t>(k) +
                                                 static_cast<std::size_t>(f.j - 1)]
                                        : digits[a * static_cast<std::size_t>(k) +
                                                 static_cast<std::size_t>(f.j - 1)];
            return w[geom.diff_flat(base, y)];
          };
          auto w_col = [&](const LFactor& f) {
            std::size_t base = f.primed ? digits[a * static_cast<std::size_t>(k) +
                                                 static_cast<std::size_t>(f.j - 1)]
                                        : digits[b * static_cast<std::size_t>(k) +
                                                 static_cast<std::size_t>(f.j - 1)];
            return w[geom.diff_flat(base, y)];
          };
          double ll = evaluate_L(monomials, w_row);
          double llp = evaluate_L(monomials, w_col);
          acc += (vt[geom.diff_flat(la, y)] * ll - vt[geom.diff_flat(lb, y)] * llp) * kv;
        } else {
          acc += (pot[geom.diff_flat(la, y)] - pot[geom.diff_flat(lb, y)]) * kv;
        }
      }
      out.ker(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc * prefac;
    }
  }
  return out;
}

namespace {

// In-place commutator with the kinetic multiplier: transform every axis,
// apply sum_unprimed xi^2 - sum_primed xi^2, transform back.
void kinetic_commutator(KernelMatrix& ker, const LatticeGrid& grid, int k) {
  int d = grid.dimension();
  int n = grid.points_per_axis();
  std::size_t rank = static_cast<std::size_t>(2 * k * d);
  for (std::size_t a = 0; a < rank; ++a)
    fft_axis(ker.data(), rank, static_cast<std::size_t>(n), a, false);
  std::size_t total = static_cast<std::size_t>(ker.rows()) * static_cast<std::size_t>(ker.cols());
  std::vector<double> xi2(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    double f = grid.frequency(m);
    xi2[static_cast<std::size_t>(m)] = f * f;
  }
  cplx* buf = ker.data();
  std::size_t half = rank / 2;
  for (std::size_t f = 0; f < total; ++f) {
    double mult = 0.0;
    std::size_t rest = f;
    for (std::size_t a = rank; a-- > 0;) {
      double v = xi2[rest % static_cast<std::size_t>(n)];
      rest /= static_cast<std::size_t>(n);
      mult += a < half ? v : -v;
    }
    buf[f] *= mult;
  }
  for (std::size_t a = 0; a < rank; ++a)
    fft_axis(ker.data(), rank, static_cast<std::size_t>(n), a, true);
}

}  // namespace

double bbgky_residual(const std::vector<WaveFunction>& snapshots, int k,
                      const ScaledPotential& sp) {
  if (snapshots.size() < 3) throw DomainError("need at least 3 snapshots");
  const WaveFunction& first = snapshots.front();
  if (first.grid.dimension() != 1) throw DomainError("hierarchy residual runs on d=1 only");
  int N = first.N;
  if (N > 4) throw DomainError("hierarchy residual limited to N <= 4");
  if (k < 1 || k > 2 || k > N) throw DomainError("marginal order must be 1 or 2 and <= N");
  for (const WaveFunction& s : snapshots)
    if (s.N != N || s.grid.points_per_axis() != first.grid.points_per_axis() ||
        s.grid.dimension() != 1 || s.grid.box_length() != first.grid.box_length())
      throw DomainError("snapshots disagree on grid or particle count");
  double dt = snapshots[1].time - snapshots[0].time;
  if (!(dt > 0.0)) throw DomainError("snapshots must advance in time");
  for (std::size_t s = 1; s < snapshots.size(); ++s)
    if (std::abs(snapshots[s].time - snapshots[s - 1].time - dt) > 1e-9 * std::max(dt, 1.0))
      throw DomainError("snapshots are not uniformly spaced");

  const LatticeGrid& grid = first.grid;
  std::size_t block = grid.total_points(1);
  std::size_t rows = ipow(block, k);
  DifferenceTable geom(grid);
  std::vector<double> vn(block);
  for (std::size_t f = 0; f < block; ++f) vn[f] = sp.VN(geom.dist[f]);
  double cell = grid.cell_volume();

  double worst = 0.0;
  for (std::size_t s = 1; s + 1 < snapshots.size(); ++s) {
    MarginalKernel gm = marginal(snapshots[s - 1], k);
    MarginalKernel g0 = marginal(snapshots[s], k);
    MarginalKernel gp = marginal(snapshots[s + 1], k);

    KernelMatrix dgdt = (gp.ker - gm.ker) * (cplx(0.0, 1.0) / (2.0 * dt));

    KernelMatrix kin = g0.ker;
    kinetic_commutator(kin, grid, k);

    KernelMatrix pot = KernelMatrix::Zero(kin.rows(), kin.cols());
    if (k == 2) {
      for (std::size_t a = 0; a < rows; ++a) {
        double va = vn[geom.diff_flat(particle_digit(a, 0, k, block),
                                      particle_digit(a, 1, k, block))];
        for (std::size_t b = 0; b < rows; ++b) {
          double vb = vn[geom.diff_flat(particle_digit(b, 0, k, block),
                                        particle_digit(b, 1, k, block))];
          pot(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
              (va - vb) / sp.N() * g0.ker(static_cast<Eigen::Index>(a),
                                          static_cast<Eigen::Index>(b));
        }
      }
    }

    KernelMatrix coll = KernelMatrix::Zero(kin.rows(), kin.cols());
    if (k < N) {
      // Collapsed diagonal of the (k+1)-marginal straight from the state:
      // for each y, the slice psi(a, y, tail) contracted over the tail.
      const WaveFunction& psi = snapshots[s];
      std::size_t tail = ipow(block, N - k - 1);
      double tail_vol = 1.0;
      for (int a = 0; a < N - k - 1; ++a) tail_vol *= grid.spacing();
      KernelMatrix slice(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
      for (std::size_t y = 0; y < block; ++y) {
        Eigen::Map<const KernelMatrix, 0, Eigen::OuterStride<>> Ay(
            psi.amp.data() + y * tail, static_cast<Eigen::Index>(rows),
            static_cast<Eigen::Index>(tail),
            Eigen::OuterStride<>(static_cast<Eigen::Index>(block * tail)));
        slice.noalias() = (Ay * Ay.adjoint()) * tail_vol;
        for (std::size_t a = 0; a < rows; ++a)
          for (std::size_t b = 0; b < rows; ++b) {
            double dv = 0.0;
            for (int j = 0; j < k; ++j)
              dv += vn[geom.diff_flat(particle_digit(a, j, k, block), y)] -
                    vn[geom.diff_flat(particle_digit(b, j, k, block), y)];
            coll(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
                dv * slice(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
          }
      }
      coll *= (sp.N() - k) / sp.N() * cell;
    }

    KernelMatrix mismatch = dgdt - kin - pot - coll;
    double scale = std::max({dgdt.norm(), kin.norm(), pot.norm(), coll.norm()});
    if (scale > 0.0) worst = std::max(worst, mismatch.norm() / scale);
  }
  return worst;
}

namespace {

EnergyTraces energy_traces_impl(const KernelMatrix& ker, const LatticeGrid& grid, int k) {
  int d = grid.dimension();
  int n = grid.points_per_axis();
  std::size_t rank = static_cast<std::size_t>(2 * k * d);
  KernelMatrix base = ker;
  for (std::size_t a = 0; a < rank; ++a)
    fft_axis(base.data(), rank, static_cast<std::size_t>(n), a, false);

  std::vector<double> xi2(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    double f = grid.frequency(m);
    xi2[static_cast<std::size_t>(m)] = f * f;
  }
  std::size_t total = static_cast<std::size_t>(ker.rows()) * static_cast<std::size_t>(ker.cols());
  KernelMatrix extra = base;
  cplx* b1 = base.data();
  cplx* b2 = extra.data();
  std::vector<double> blocks(static_cast<std::size_t>(2 * k));
  for (std::size_t f = 0; f < total; ++f) {
    // |xi|^2 per particle block, axis a belonging to particle a/d.
    std::fill(blocks.begin(), blocks.end(), 0.0);
    std::size_t rest = f;
    for (std::size_t a = rank; a-- > 0;) {
      blocks[a / static_cast<std::size_t>(d)] += xi2[rest % static_cast<std::size_t>(n)];
      rest /= static_cast<std::size_t>(n);
    }
    double mult = 1.0;
    for (double b : blocks) mult *= std::sqrt(1.0 + b);
    b1[f] *= mult;
    double e = std::sqrt((1.0 + blocks[0]) * (1.0 + blocks[static_cast<std::size_t>(k)]));
    b2[f] *= mult * e;
  }
  for (std::size_t a = 0; a < rank; ++a) {
    fft_axis(base.data(), rank, static_cast<std::size_t>(n), a, true);
    fft_axis(extra.data(), rank, static_cast<std::size_t>(n), a, true);
  }
  double vol = 1.0;
  for (int a = 0; a < k * d; ++a) vol *= grid.spacing();
  EnergyTraces out;
  cplx t1(0.0, 0.0), t2(0.0, 0.0);
  for (Eigen::Index i = 0; i < base.rows(); ++i) {
    t1 += base(i, i);
    t2 += extra(i, i);
  }
  out.trace = t1.real() * vol;
  out.trace_extra = t2.real() * vol;
  return out;
}

}  // namespace

EnergyTraces energy_functional(const MarginalKernel& gamma) {
  return energy_traces_impl(gamma.ker, gamma.grid, gamma.k);
}

EnergyTraces energy_functional(const DressedMarginal& alpha) {
  return energy_traces_impl(alpha.alpha, alpha.grid, alpha.k);
}

}  // namespace gphl
