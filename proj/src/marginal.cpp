#include "gphl/marginal.hpp"

#include <cmath>
#include <random>

namespace gphl {

namespace {

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  while (e-- > 0) r *= base;
  return r;
}

}  // namespace

double MarginalKernel::config_volume() const {
  double v = 1.0;
  for (int a = 0; a < k * grid.dimension(); ++a) v *= grid.spacing();
  return v;
}

double MarginalKernel::trace() const {
  cplx t(0.0, 0.0);
  for (Eigen::Index i = 0; i < ker.rows(); ++i) t += ker(i, i);
  return t.real() * config_volume();
}

double MarginalKernel::hermitian_defect() const {
  double worst = 0.0, peak = 0.0;
  for (Eigen::Index i = 0; i < ker.rows(); ++i)
    for (Eigen::Index j = i; j < ker.cols(); ++j) {
      worst = std::max(worst, std::abs(ker(i, j) - std::conj(ker(j, i))));
      peak = std::max(peak, std::abs(ker(i, j)));
    }
  return peak > 0.0 ? worst / peak : 0.0;
}

double MarginalKernel::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
  Eigen::MatrixXcd herm = (Eigen::MatrixXcd(ker) + Eigen::MatrixXcd(ker).adjoint()) / 2.0;
  es.compute(herm, Eigen::EigenvaluesOnly);
  // Eigenvalues of the discretized operator: kernel values scale by the
  // configuration cell volume when summed as an operator.
  return es.eigenvalues().minCoeff() * config_volume();
}

MarginalKernel marginal(const WaveFunction& psi, int k) {
  if (k < 1 || k > psi.N) throw DomainError("marginal order must lie in [1, N]");
  int d = psi.grid.dimension();
  std::size_t block = psi.grid.total_points(d);
  std::size_t rows = ipow(block, k);
  std::size_t cols = psi.amp.size() / rows;
  require_within_budget(rows * rows * sizeof(cplx) + psi.amp.size() * sizeof(cplx),
                        memory_budget_bytes(), "marginal kernel");

  // psi as a rows x cols matrix: leading k particles index the row.
  Eigen::Map<const KernelMatrix> A(psi.amp.data(), static_cast<Eigen::Index>(rows),
                                   static_cast<Eigen::Index>(cols));
  MarginalKernel out;
  out.k = k;
  out.grid = psi.grid;
  double tail_volume = 1.0;
  for (int a = 0; a < (psi.N - k) * d; ++a) tail_volume *= psi.grid.spacing();
  out.ker = (A * A.adjoint()) * tail_volume;
  return out;
}

MarginalKernel partial_trace(const MarginalKernel& gamma) {
  if (gamma.k < 2) throw DomainError("partial trace needs order at least 2");
  int d = gamma.grid.dimension();
  std::size_t block = gamma.grid.total_points(d);
  std::size_t rows = gamma.rows() / block;
  MarginalKernel out;
  out.k = gamma.k - 1;
  out.grid = gamma.grid;
  out.ker = KernelMatrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
  double cell = 1.0;
  for (int a = 0; a < d; ++a) cell *= gamma.grid.spacing();
  for (std::size_t a = 0; a < rows; ++a)
    for (std::size_t b = 0; b < rows; ++b) {
      cplx s(0.0, 0.0);
      for (std::size_t m = 0; m < block; ++m)
        s += gamma.ker(static_cast<Eigen::Index>(a * block + m),
                       static_cast<Eigen::Index>(b * block + m));
      out.ker(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = s * cell;
    }
  return out;
}

MarginalKernel product_kernel(const LatticeGrid& grid, const std::vector<cplx>& phi, int k) {
  int d = grid.dimension();
  std::size_t block = grid.total_points(d);
  if (phi.size() != block) throw DomainError("field does not match the grid");
  std::size_t rows = ipow(block, k);
  MarginalKernel out;
  out.k = k;
  out.grid = grid;
  out.ker.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
  std::vector<cplx> amp(rows);
  std::vector<std::size_t> shifts(static_cast<std::size_t>(k));
  for (int p = 0; p < k; ++p) shifts[static_cast<std::size_t>(p)] = ipow(block, k - 1 - p);
  for (std::size_t a = 0; a < rows; ++a) {
    cplx v(1.0, 0.0);
    for (int p = 0; p < k; ++p) v *= phi[(a / shifts[p]) % block];
    amp[a] = v;
  }
  for (std::size_t a = 0; a < rows; ++a)
    for (std::size_t b = 0; b < rows; ++b)
      out.ker(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          amp[a] * std::conj(amp[b]);
  return out;
}

double hs_norm(const MarginalKernel& a) { return a.ker.norm() * a.config_volume(); }

double hs_distance(const MarginalKernel& a, const MarginalKernel& b) {
  if (a.ker.rows() != b.ker.rows()) throw DomainError("kernel sizes differ");
  return (a.ker - b.ker).norm() * a.config_volume();
}

double chaos_distance(const MarginalKernel& gamma, const std::vector<cplx>& phi) {
  MarginalKernel prod = product_kernel(gamma.grid, phi, gamma.k);
  return hs_distance(gamma, prod);
}

double dk_metric(const MarginalKernel& gamma, const MarginalKernel& gamma_tilde, int family_size,
                 unsigned seed) {
  if (gamma.ker.rows() != gamma_tilde.ker.rows()) throw DomainError("kernel sizes differ");
  Eigen::Index m = gamma.ker.rows();
  double vol = gamma.config_volume();
  KernelMatrix delta = gamma.ker - gamma_tilde.ker;
  double total = 0.0;
  double weight = 1.0;
  for (int i = 1; i <= family_size; ++i) {
    weight *= 0.5;
    // J_i: fixed-seed Hermitian kernel with unit Hilbert-Schmidt norm.
    std::mt19937 rng(seed + static_cast<unsigned>(i));
    std::normal_distribution<double> gauss(0.0, 1.0);
    KernelMatrix J(m, m);
    for (Eigen::Index r = 0; r < m; ++r)
      for (Eigen::Index c = 0; c < m; ++c) J(r, c) = cplx(gauss(rng), gauss(rng));
    KernelMatrix H = (J + J.adjoint().eval()) / 2.0;
    double norm = H.norm() * vol;  // HS norm carries one volume factor
    if (norm == 0.0) continue;
    H /= norm;
    cplx inner(0.0, 0.0);
    for (Eigen::Index r = 0; r < m; ++r)
      for (Eigen::Index c = 0; c < m; ++c) inner += std::conj(H(r, c)) * delta(r, c);
    total += weight * std::abs(inner) * vol * vol;
  }
  return total;
}

}  // namespace gphl
