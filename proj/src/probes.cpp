#include "gphl/probes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>

#include "gphl/fft.hpp"
#include "gphl/potential.hpp"
#include "gphl/xb.hpp"

namespace gphl {
namespace {

constexpr int kProfileSamples = 32;
constexpr double kProfileWindow = 2.0;
constexpr double kNominalB = -0.5;  // endpoint weight exponent, taken at nominal

// Flat enumeration of a coefficient cube, with mode vectors and |m|^2 cached.
struct CubeIndex {
  int half;
  int side;
  int count;
  std::vector<std::array<int, 3>> vecs;
  std::vector<int> sq;

  explicit CubeIndex(int h) : half(h), side(2 * h + 1), count(side * side * side) {
    vecs.resize(count);
    sq.resize(count);
    for (int flat = 0; flat < count; ++flat) {
      vecs[flat][2] = flat % side - half;
      vecs[flat][1] = (flat / side) % side - half;
      vecs[flat][0] = flat / (side * side) - half;
      sq[flat] = vecs[flat][0] * vecs[flat][0] + vecs[flat][1] * vecs[flat][1] +
                 vecs[flat][2] * vecs[flat][2];
    }
  }
  int flat(int mx, int my, int mz) const {
    return ((mx + half) * side + (my + half)) * side + (mz + half);
  }
};

std::array<int, 3> add(const std::array<int, 3>& a, const std::array<int, 3>& b, int sign) {
  return {a[0] + sign * b[0], a[1] + sign * b[1], a[2] + sign * b[2]};
}

// Riemann quadrature of ||V||_{L^p} over the box from a coefficient cube.
double potential_lp_norm(const ModeCube& v, const LatticeGrid& grid, double p) {
  const std::size_t n = grid.points_per_axis();
  const int side = v.side;
  // per-axis phase tables e^{i m x}
  std::vector<cplx> phase(static_cast<std::size_t>(side) * n);
  for (int m = -v.half; m <= v.half; ++m)
    for (std::size_t i = 0; i < n; ++i) {
      const double x = grid.position(i);
      phase[static_cast<std::size_t>(m + v.half) * n + i] = std::polar(1.0, m * x);
    }
  double sum = 0.0;
  for (std::size_t ix = 0; ix < n; ++ix)
    for (std::size_t iy = 0; iy < n; ++iy)
      for (std::size_t iz = 0; iz < n; ++iz) {
        cplx val(0.0, 0.0);
        for (int f = 0; f < side * side * side; ++f) {
          const cplx c = v.c[f];
          if (c == cplx(0.0, 0.0)) continue;
          const int mz = f % side, my = (f / side) % side, mx = f / (side * side);
          val += c * phase[static_cast<std::size_t>(mx) * n + ix] *
                 phase[static_cast<std::size_t>(my) * n + iy] *
                 phase[static_cast<std::size_t>(mz) * n + iz];
        }
        sum += std::pow(std::abs(val), p);
      }
  return std::pow(sum * grid.cell_volume(), 1.0 / p);
}

double profile_l2(const std::vector<cplx>& prof, double dt) {
  double s = 0.0;
  for (const cplx& v : prof) s += std::norm(v);
  return std::sqrt(s * dt);
}

void check_profile(const std::vector<cplx>& prof, double dt) {
  if (prof.size() < 2 || !is_power_of_two(prof.size()))
    throw DomainError("probe time profile length must be a power of two, at least 2");
  if (!(dt > 0.0)) throw DomainError("probe time step must be positive");
}

}  // namespace

double xb_separable(const std::vector<cplx>& time_profile, double dt,
                    const std::vector<double>& active_hist,
                    const std::vector<double>& passive_hist, double b) {
  check_profile(time_profile, dt);
  const std::size_t T = time_profile.size();
  std::vector<cplx> that = time_profile;
  fft_inplace(that.data(), T, false);
  double total = 0.0;
  for (std::size_t i = 0; i < T; ++i) {
    const double amp = std::norm(that[i]);
    if (amp == 0.0) continue;
    const long signed_mode = i < T / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(T);
    const double tau = 2.0 * kPi * static_cast<double>(signed_mode) / (dt * static_cast<double>(T));
    double wsum = 0.0;
    for (std::size_t s = 0; s < active_hist.size(); ++s) {
      if (active_hist[s] == 0.0) continue;
      for (std::size_t sp = 0; sp < passive_hist.size(); ++sp) {
        if (passive_hist[sp] == 0.0) continue;
        const double u = tau + static_cast<double>(s) - static_cast<double>(sp);
        wsum += std::pow(1.0 + u * u, b) * active_hist[s] * passive_hist[sp];
      }
    }
    total += amp * wsum;
  }
  return std::sqrt(total * dt / static_cast<double>(T));
}

ProbeSample two_body_sample(const TwoBodyMember& member, const std::string& name,
                            const LatticeGrid& grid) {
  if (grid.dimension() != 3) throw DomainError("probes need a three dimensional grid");
  const bool l32 = name == "str_2body_L32";
  if (!l32 && name != "str_2body_L65_shared")
    throw DomainError("unknown two-body probe name: " + name);
  check_profile(member.time_profile, member.dt);
  if (member.half < 1) throw DomainError("two-body half width must be positive");
  const CubeIndex cm(member.half);
  const std::size_t tensor = static_cast<std::size_t>(cm.count) * cm.count;
  if (member.active.size() != tensor || member.passive.size() != tensor)
    throw DomainError("two-body coefficient tensors must match the half width");

  const double vol = std::pow(grid.box_length(), 3);
  const CubeIndex cf(member.half + member.potential.half);

  // spectrum of V(x1 - x2) gamma(x1, x2): shift by the potential mode
  std::vector<cplx> spec(static_cast<std::size_t>(cf.count) * cf.count, cplx(0.0, 0.0));
  const CubeIndex cv(member.potential.half);
  for (int e = 0; e < cv.count; ++e) {
    const cplx v = member.potential.c[e];
    if (v == cplx(0.0, 0.0)) continue;
    const std::array<int, 3>& eta = cv.vecs[e];
    for (int m1 = 0; m1 < cm.count; ++m1) {
      const std::array<int, 3> x1 = add(cm.vecs[m1], eta, +1);
      const std::size_t f1 = static_cast<std::size_t>(cf.flat(x1[0], x1[1], x1[2]));
      for (int m2 = 0; m2 < cm.count; ++m2) {
        const cplx a = member.active[static_cast<std::size_t>(m1) * cm.count + m2];
        if (a == cplx(0.0, 0.0)) continue;
        const std::array<int, 3> x2 = add(cm.vecs[m2], eta, -1);
        spec[f1 * cf.count + cf.flat(x2[0], x2[1], x2[2])] += v * a;
      }
    }
  }

  std::vector<double> ahist(static_cast<std::size_t>(2 * cf.sq[0]) + 1, 0.0);
  for (int f1 = 0; f1 < cf.count; ++f1)
    for (int f2 = 0; f2 < cf.count; ++f2) {
      const double w = std::norm(spec[static_cast<std::size_t>(f1) * cf.count + f2]);
      if (w != 0.0) ahist[static_cast<std::size_t>(cf.sq[f1] + cf.sq[f2])] += vol * vol * w;
    }
  std::vector<double> phist(static_cast<std::size_t>(2 * cm.sq[0]) + 1, 0.0);
  for (int m1 = 0; m1 < cm.count; ++m1)
    for (int m2 = 0; m2 < cm.count; ++m2) {
      const double w = std::norm(member.passive[static_cast<std::size_t>(m1) * cm.count + m2]);
      if (w != 0.0) phist[static_cast<std::size_t>(cm.sq[m1] + cm.sq[m2])] += vol * vol * w;
    }

  ProbeSample out;
  out.lhs = xb_separable(member.time_profile, member.dt, ahist, phist, kNominalB);

  // derivative rides the first coordinate in the L^{3/2} case
  double mult = 0.0, pass = 0.0;
  for (int m1 = 0; m1 < cm.count; ++m1)
    for (int m2 = 0; m2 < cm.count; ++m2) {
      const std::size_t idx = static_cast<std::size_t>(m1) * cm.count + m2;
      const double s1 = cm.sq[m1], s2 = cm.sq[m2];
      const double w = l32 ? 1.0 + s1 : std::pow((1.0 + s1) * (1.0 + s2), 0.75);
      mult += w * std::norm(member.active[idx]);
      pass += std::norm(member.passive[idx]);
    }
  const double p = l32 ? 1.5 : 1.2;
  out.rhs = potential_lp_norm(member.potential, grid, p) *
            profile_l2(member.time_profile, member.dt) * std::sqrt(vol * vol * mult) *
            std::sqrt(vol * vol * pass);
  return out;
}

ProbeSample three_body_sample(const ThreeBodyMember& member, const LatticeGrid& grid) {
  if (grid.dimension() != 3) throw DomainError("probes need a three dimensional grid");
  check_profile(member.time_profile, member.dt);
  for (int i = 0; i < 3; ++i)
    if (member.g[i].half != 1 || member.h[i].half != 1)
      throw DomainError("three-body probe cubes must have half width 1");
  if (member.potential_v.half != 1 || member.potential_w.half != 1)
    throw DomainError("three-body probe cubes must have half width 1");

  const CubeIndex c1(1), c2(2), c3(3);
  const double vol = std::pow(grid.box_length(), 3);
  const double vol3 = vol * vol * vol;
  static const int kPerm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

  // spectrum of V(x1-x2) W(x2-x3) gamma_sym on (xi1, xi2, xi3), xi2 widened by
  // both potential shifts; assembled one product permutation at a time
  const std::size_t spec_count =
      static_cast<std::size_t>(c2.count) * c3.count * c2.count;
  require_within_budget(spec_count * sizeof(cplx) * 2, memory_budget_bytes(),
                        "three-body probe spectrum");
  std::vector<cplx> spec(spec_count, cplx(0.0, 0.0));
  std::vector<cplx> mix(static_cast<std::size_t>(c2.count) * c2.count);
  for (const auto& perm : kPerm) {
    const ModeCube& ga = member.g[perm[0]];
    const ModeCube& gb = member.g[perm[1]];
    const ModeCube& gc = member.g[perm[2]];
    // mix(u, xi3) = sum_zeta W(zeta) gb(u - zeta) gc(xi3 + zeta)
    std::fill(mix.begin(), mix.end(), cplx(0.0, 0.0));
    for (int z = 0; z < c1.count; ++z) {
      const cplx w = member.potential_w.c[z];
      if (w == cplx(0.0, 0.0)) continue;
      const std::array<int, 3>& zeta = c1.vecs[z];
      for (int u = 0; u < c2.count; ++u) {
        const std::array<int, 3> mu = add(c2.vecs[u], zeta, -1);
        const cplx bm = gb.get(mu[0], mu[1], mu[2]);
        if (bm == cplx(0.0, 0.0)) continue;
        const cplx wb = w * bm;
        cplx* row = mix.data() + static_cast<std::size_t>(u) * c2.count;
        for (int t3 = 0; t3 < c2.count; ++t3) {
          const std::array<int, 3> mc = add(c2.vecs[t3], zeta, +1);
          const cplx cm = gc.get(mc[0], mc[1], mc[2]);
          if (cm != cplx(0.0, 0.0)) row[t3] += wb * cm;
        }
      }
    }
    for (int e = 0; e < c1.count; ++e) {
      const cplx v = member.potential_v.c[e];
      if (v == cplx(0.0, 0.0)) continue;
      const std::array<int, 3>& eta = c1.vecs[e];
      for (int m = 0; m < c1.count; ++m) {
        const cplx lead = v * ga.c[m] / 6.0;
        if (lead == cplx(0.0, 0.0)) continue;
        const std::array<int, 3> x1 = add(c1.vecs[m], eta, +1);
        const std::size_t f1 = static_cast<std::size_t>(c2.flat(x1[0], x1[1], x1[2]));
        for (int u = 0; u < c2.count; ++u) {
          const std::array<int, 3> x2 = add(c2.vecs[u], eta, -1);
          const std::size_t f2 = static_cast<std::size_t>(c3.flat(x2[0], x2[1], x2[2]));
          const cplx* row = mix.data() + static_cast<std::size_t>(u) * c2.count;
          cplx* dst = spec.data() + (f1 * c3.count + f2) * c2.count;
          for (int f3 = 0; f3 < c2.count; ++f3) dst[f3] += lead * row[f3];
        }
      }
    }
  }

  std::vector<double> ahist(static_cast<std::size_t>(2 * c2.sq[0] + c3.sq[0]) + 1, 0.0);
  for (int f1 = 0; f1 < c2.count; ++f1)
    for (int f2 = 0; f2 < c3.count; ++f2) {
      const cplx* row =
          spec.data() + (static_cast<std::size_t>(f1) * c3.count + f2) * c2.count;
      const int s12 = c2.sq[f1] + c3.sq[f2];
      for (int f3 = 0; f3 < c2.count; ++f3) {
        const double w = std::norm(row[f3]);
        if (w != 0.0) ahist[static_cast<std::size_t>(s12 + c2.sq[f3])] += vol3 * w;
      }
    }

  // symmetrized passive and active product tensors on the small cube
  const std::size_t small = static_cast<std::size_t>(c1.count) * c1.count * c1.count;
  std::vector<cplx> hsym(small, cplx(0.0, 0.0)), gsym(small, cplx(0.0, 0.0));
  for (const auto& perm : kPerm)
    for (int m1 = 0; m1 < c1.count; ++m1)
      for (int m2 = 0; m2 < c1.count; ++m2)
        for (int m3 = 0; m3 < c1.count; ++m3) {
          const std::size_t idx =
              (static_cast<std::size_t>(m1) * c1.count + m2) * c1.count + m3;
          hsym[idx] += member.h[perm[0]].c[m1] * member.h[perm[1]].c[m2] *
                       member.h[perm[2]].c[m3] / 6.0;
          gsym[idx] += member.g[perm[0]].c[m1] * member.g[perm[1]].c[m2] *
                       member.g[perm[2]].c[m3] / 6.0;
        }
  std::vector<double> phist(static_cast<std::size_t>(3 * c1.sq[0]) + 1, 0.0);
  double mult = 0.0, pass = 0.0;
  for (int m1 = 0; m1 < c1.count; ++m1)
    for (int m2 = 0; m2 < c1.count; ++m2)
      for (int m3 = 0; m3 < c1.count; ++m3) {
        const std::size_t idx =
            (static_cast<std::size_t>(m1) * c1.count + m2) * c1.count + m3;
        const double hp = std::norm(hsym[idx]);
        if (hp != 0.0) phist[static_cast<std::size_t>(c1.sq[m1] + c1.sq[m2] + c1.sq[m3])] += vol3 * hp;
        pass += hp;
        mult += (1.0 + c1.sq[m1]) * (1.0 + c1.sq[m2]) * (1.0 + c1.sq[m3]) * std::norm(gsym[idx]);
      }

  ProbeSample out;
  out.lhs = xb_separable(member.time_profile, member.dt, ahist, phist, kNominalB);
  out.rhs = potential_lp_norm(member.potential_v, grid, 1.5) *
            potential_lp_norm(member.potential_w, grid, 1.5) *
            profile_l2(member.time_profile, member.dt) * std::sqrt(vol3 * mult) *
            std::sqrt(vol3 * pass);
  return out;
}

namespace {

void fft3(cplx* data, std::size_t n, bool inverse) {
  for (std::size_t axis = 0; axis < 3; ++axis) fft_axis(data, 3, n, axis, inverse);
}

// ||P_{<=M} |grad| phi||^2 from the spectral array, grid measure
double graded_mass(const std::vector<cplx>& phat, const std::vector<double>& freqsq,
                   double level, double cell, std::size_t total) {
  const double hi = level * level * (1.0 + 1e-12);
  double s = 0.0;
  for (std::size_t i = 0; i < phat.size(); ++i)
    if (freqsq[i] <= hi) s += freqsq[i] * std::norm(phat[i]);
  return s * cell / static_cast<double>(total);
}

}  // namespace

ProbeSample collapse_sum_sample(const CollapseSumMember& member, const ScaledPotential& sp,
                                const LatticeGrid& grid) {
  if (grid.dimension() != 3) throw DomainError("probes need a three dimensional grid");
  if (sp.dimension() != 3)
    throw DomainError("collapse probe needs a three dimensional scaled potential");
  const std::size_t n = grid.points_per_axis();
  const std::size_t total = grid.total_points(3);
  if (member.phi1.size() != total || member.phi2.size() != total)
    throw DomainError("collapse probe fields must match the grid");
  if (member.time_samples < 2) throw DomainError("collapse probe needs at least two time samples");
  if (!(member.window > 0.0)) throw DomainError("collapse probe window must be positive");
  if (!(member.epsilon > 0.0) || !(member.epsilon < 1.0))
    throw DomainError("collapse probe epsilon must lie in (0, 1)");
  int exponent = 0;
  if (!(member.level >= 1.0) || std::frexp(member.level, &exponent) != 0.5)
    throw DomainError("collapse probe level must be a power of two, at least 1");

  const double cell = grid.cell_volume();
  const double L = grid.box_length();

  std::vector<double> freqsq(total, 0.0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    for (int axis = 2; axis >= 0; --axis) {
      const double f = grid.frequency(rest % n);
      rest /= n;
      freqsq[flat] += f * f;
    }
  }

  // screened interaction sampled with the minimum-image radius
  std::vector<cplx> vthat(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    double rsq = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
      const double pos = grid.position(rest % n);
      rest /= n;
      const double dx = std::min(pos, L - pos);
      rsq += dx * dx;
    }
    vthat[flat] = cplx(sp.VN_tilde(std::sqrt(rsq)), 0.0);
  }
  fft3(vthat.data(), n, false);

  std::vector<cplx> p1hat = member.phi1, p2hat = member.phi2;
  fft3(p1hat.data(), n, false);
  fft3(p2hat.data(), n, false);

  const int T = member.time_samples;
  const double dtp = member.window / static_cast<double>(T - 1);
  const double hi = member.level * member.level * (1.0 + 1e-12);
  std::vector<cplx> p1(total), dens(total), a(total), b(total);
  double acc = 0.0;
  for (int it = 0; it < T; ++it) {
    const double t = it * dtp;
    for (std::size_t i = 0; i < total; ++i) {
      const cplx phase = std::polar(1.0, -freqsq[i] * t);
      p1[i] = p1hat[i] * phase;
      dens[i] = p2hat[i] * phase;
    }
    fft3(p1.data(), n, true);
    fft3(dens.data(), n, true);
    for (std::size_t i = 0; i < total; ++i) dens[i] = cplx(std::norm(dens[i]), 0.0);
    fft3(dens.data(), n, false);
    for (std::size_t i = 0; i < total; ++i) dens[i] *= vthat[i];
    fft3(dens.data(), n, true);
    // dens now holds the convolved mean field A(t, x), real up to rounding
    for (std::size_t i = 0; i < total; ++i) {
      a[i] = dens[i].real() * cell * p1[i];
      b[i] = p1[i];
    }
    fft3(a.data(), n, false);
    fft3(b.data(), n, false);
    for (std::size_t i = 0; i < total; ++i) {
      const double rho = freqsq[i] <= hi ? std::sqrt(freqsq[i]) : 0.0;
      a[i] *= rho;
      b[i] *= rho;
    }
    fft3(a.data(), n, true);
    fft3(b.data(), n, true);
    cplx gab(0.0, 0.0);
    double gaa = 0.0, gbb = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
      gaa += std::norm(a[i]);
      gbb += std::norm(b[i]);
      gab += a[i] * std::conj(b[i]);
    }
    gaa *= cell;
    gbb *= cell;
    gab *= cell;
    const double hs2 = 2.0 * (gaa * gbb - (gab * gab).real());
    const double weight = (it == 0 || it == T - 1) ? 0.5 : 1.0;
    acc += weight * std::max(hs2, 0.0) * dtp;
  }

  ProbeSample out;
  out.lhs = std::sqrt(acc);

  const double upper = sp.base().support_radius() / sp.scale();
  const double l1 = 4.0 * kPi *
                    quad_integrate([&sp](double r) { return r * r * sp.VN_tilde(r); }, 0.0,
                                   upper, 1e-12);

  const double q = std::pow(2.0, -(1.0 - member.epsilon));
  const double corner = std::sqrt(3.0) * grid.nyquist_frequency();
  double sum = 0.0;
  double level = member.level;
  while (true) {
    const double factor = std::pow(member.level / level, 1.0 - member.epsilon);
    const double rnorm = graded_mass(p1hat, freqsq, level, cell, total) *
                         graded_mass(p2hat, freqsq, level, cell, total);
    if (level >= corner) {
      sum += factor * rnorm / (1.0 - q);
      break;
    }
    sum += factor * rnorm;
    level *= 2.0;
  }
  out.rhs = l1 * sum;
  return out;
}

namespace {

ModeCube random_cube(int half, std::mt19937& rng) {
  std::normal_distribution<double> nd;
  ModeCube cube(half);
  for (auto& v : cube.c) {
    const double re = nd(rng), im = nd(rng);
    v = cplx(re, im);
  }
  return cube;
}

// conjugate-symmetric coefficients, so the position field is real
ModeCube random_real_cube(int half, std::mt19937& rng) {
  std::normal_distribution<double> nd;
  ModeCube cube(half);
  for (int mx = -half; mx <= half; ++mx)
    for (int my = -half; my <= half; ++my)
      for (int mz = -half; mz <= half; ++mz) {
        const int lead = mx != 0 ? mx : (my != 0 ? my : mz);
        if (lead < 0) continue;
        if (lead == 0) {
          cube.at(0, 0, 0) = cplx(nd(rng), 0.0);
        } else {
          const double re = nd(rng), im = nd(rng);
          cube.at(mx, my, mz) = cplx(re, im);
          cube.at(-mx, -my, -mz) = cplx(re, -im);
        }
      }
  return cube;
}

std::vector<cplx> random_profile(std::mt19937& rng, double* dt_out) {
  std::normal_distribution<double> nd;
  cplx harm[5];
  for (cplx& h : harm) {
    const double re = nd(rng), im = nd(rng);
    h = cplx(re, im);
  }
  const double dt = kProfileWindow / kProfileSamples;
  const double span = (kProfileSamples - 1) * dt;
  std::vector<cplx> prof(kProfileSamples);
  for (int i = 0; i < kProfileSamples; ++i) {
    const double t = i * dt;
    cplx wave(0.0, 0.0);
    for (int j = -2; j <= 2; ++j)
      wave += harm[j + 2] * std::polar(1.0, 2.0 * kPi * j * t / kProfileWindow);
    prof[i] = time_cutoff(t / span) * wave;
  }
  *dt_out = dt;
  return prof;
}

void symmetrize_pair_tensor(std::vector<cplx>& t, int count) {
  for (int i = 0; i < count; ++i)
    for (int j = i; j < count; ++j) {
      const cplx avg = 0.5 * (t[static_cast<std::size_t>(i) * count + j] +
                              t[static_cast<std::size_t>(j) * count + i]);
      t[static_cast<std::size_t>(i) * count + j] = avg;
      t[static_cast<std::size_t>(j) * count + i] = avg;
    }
}

TwoBodyMember random_two_body(unsigned seed, int index) {
  std::mt19937 rng(seed + 0x9e3779b9u * static_cast<unsigned>(index + 1));
  std::normal_distribution<double> nd;
  TwoBodyMember m;
  m.half = 2;
  const CubeIndex cm(m.half);
  const std::size_t tensor = static_cast<std::size_t>(cm.count) * cm.count;
  m.active.resize(tensor);
  m.passive.resize(tensor);
  for (auto& v : m.active) {
    const double re = nd(rng), im = nd(rng);
    v = cplx(re, im);
  }
  for (auto& v : m.passive) {
    const double re = nd(rng), im = nd(rng);
    v = cplx(re, im);
  }
  symmetrize_pair_tensor(m.active, cm.count);
  symmetrize_pair_tensor(m.passive, cm.count);
  m.potential = random_real_cube(1, rng);
  m.time_profile = random_profile(rng, &m.dt);
  return m;
}

ThreeBodyMember random_three_body(unsigned seed, int index) {
  std::mt19937 rng(seed + 0x9e3779b9u * static_cast<unsigned>(index + 1));
  ThreeBodyMember m;
  for (int i = 0; i < 3; ++i) m.g[i] = random_cube(1, rng);
  for (int i = 0; i < 3; ++i) m.h[i] = random_cube(1, rng);
  m.potential_v = random_real_cube(1, rng);
  m.potential_w = random_real_cube(1, rng);
  m.time_profile = random_profile(rng, &m.dt);
  return m;
}

std::vector<cplx> cube_to_field(const ModeCube& cube, const LatticeGrid& grid) {
  const std::size_t n = grid.points_per_axis();
  const std::size_t total = grid.total_points(3);
  std::vector<cplx> spec(total, cplx(0.0, 0.0));
  const double amp = static_cast<double>(total);
  const int ni = static_cast<int>(n);
  for (int mx = -cube.half; mx <= cube.half; ++mx)
    for (int my = -cube.half; my <= cube.half; ++my)
      for (int mz = -cube.half; mz <= cube.half; ++mz) {
        const std::size_t bx = static_cast<std::size_t>((mx % ni + ni) % ni);
        const std::size_t by = static_cast<std::size_t>((my % ni + ni) % ni);
        const std::size_t bz = static_cast<std::size_t>((mz % ni + ni) % ni);
        spec[(bx * n + by) * n + bz] = cube.get(mx, my, mz) * amp;
      }
  fft3(spec.data(), n, true);
  return spec;
}

CollapseSumMember random_collapse(unsigned seed, int index, const LatticeGrid& grid) {
  std::mt19937 rng(seed + 0x9e3779b9u * static_cast<unsigned>(index + 1));
  CollapseSumMember m;
  const ModeCube c1 = random_cube(2, rng);
  const ModeCube c2 = random_cube(2, rng);
  m.phi1 = cube_to_field(c1, grid);
  m.phi2 = cube_to_field(c2, grid);
  m.level = static_cast<double>(1 << (index % 3));
  m.window = 0.5;
  m.time_samples = 16;
  m.epsilon = 0.1;
  return m;
}

}  // namespace

const std::vector<std::string>& probe_names() {
  static const std::vector<std::string> names = {"str_2body_L32", "str_2body_L65_shared",
                                                 "str_3body", "collapse_LP_sum"};
  return names;
}

ProbeReport probe_inequality(const std::string& name, int ensemble_size, int points_per_axis,
                             unsigned seed) {
  const auto& names = probe_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw DomainError("unknown probe name: " + name);
  if (ensemble_size < 1) throw DomainError("probe ensemble size must be positive");
  const LatticeGrid grid(3, static_cast<std::size_t>(points_per_axis), 2.0 * kPi);

  ProbeReport rep;
  rep.name = name;
  rep.points_per_axis = points_per_axis;
  rep.seed = seed;
  rep.ratios.reserve(static_cast<std::size_t>(ensemble_size));

  const bool collapse = name == "collapse_LP_sum";
  ScaledPotential sp = collapse
                           ? ScaledPotential(RadialPotential::square_barrier(2.0, 1.0), 4.0, 0.5, 3)
                           : ScaledPotential(RadialPotential::square_barrier(1.0, 1.0), 1.0, 1.0, 3);
  for (int i = 0; i < ensemble_size; ++i) {
    ProbeSample s;
    if (name == "str_3body") {
      s = three_body_sample(random_three_body(seed, i), grid);
    } else if (collapse) {
      s = collapse_sum_sample(random_collapse(seed, i, grid), sp, grid);
    } else {
      s = two_body_sample(random_two_body(seed, i), name, grid);
    }
    rep.ratios.push_back(s.lhs == 0.0 ? 0.0 : s.lhs / s.rhs);
  }
  rep.max_ratio = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  std::vector<double> sorted = rep.ratios;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t half = sorted.size() / 2;
  rep.median_ratio = sorted.size() % 2 == 1 ? sorted[half]
                                            : 0.5 * (sorted[half - 1] + sorted[half]);
  return rep;
}

EnvelopeReport potential_shape_compare(const ScaledPotential& sp) {
  if (sp.dimension() != 3)
    throw DomainError("envelope comparison needs a three dimensional scaled potential");
  const double beta = sp.beta();

  constexpr int kScan = 320;
  std::vector<double> rho(kScan);
  const double lo = std::log(1e-3), hi = std::log(40.0);
  for (int i = 0; i < kScan; ++i)
    rho[i] = std::exp(lo + (hi - lo) * i / static_cast<double>(kScan - 1));

  EnvelopeReport rep;
  for (int e = 6; e <= 20; ++e) {
    const double N = static_cast<double>(1ull << e);
    const ScaledPotential s(sp.base(), N, beta, 3);
    const double lam = s.scale();
    double vpk = 0.0, gpk = 0.0, vratio = 0.0, gratio = 0.0;
    for (int i = 0; i < kScan; ++i) {
      const double r = rho[i] / lam;
      const double bracket = 1.0 + rho[i] * rho[i];
      const double v = s.VN(r) / N;
      vpk = std::max(vpk, v);
      if (v > 0.0)
        vratio = std::max(vratio, std::exp(std::log(v) - (3.0 * beta - 1.0) * std::log(N) +
                                           50.0 * std::log(bracket)));
      const double wp = s.dressing_radial_derivative(r);
      gpk = std::max(gpk, wp * wp);
      gratio = std::max(gratio, wp * wp * bracket * bracket / std::pow(N, 4.0 * beta - 2.0));
      rep.grad_constant = std::max(rep.grad_constant,
                                   std::abs(wp) * bracket / std::pow(N, 2.0 * beta - 1.0));
    }
    rep.N_values.push_back(N);
    rep.v_peak.push_back(vpk);
    rep.grad_peak.push_back(gpk);
    rep.v_envelope_ratio.push_back(vratio);
    rep.grad_envelope_ratio.push_back(gratio);
    rep.v_constant = std::max(rep.v_constant, vratio);
  }

  // least-squares slope of log2(grad_peak / v_peak) against log2 N
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const int count = static_cast<int>(rep.N_values.size());
  for (int i = 0; i < count; ++i) {
    const double x = std::log2(rep.N_values[i]);
    const double y = std::log2(rep.grad_peak[i] / rep.v_peak[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  rep.fitted_gap_exponent = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return rep;
}

}  // namespace gphl
