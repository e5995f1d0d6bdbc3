#include "gphl/dyadic.hpp"

#include <cmath>

namespace gphl {

namespace {

constexpr double kDyadicCap = 1099511627776.0;  // 2^40

double factorial_d(int j) {
  double f = 1.0;
  for (int i = 2; i <= j; ++i) f *= i;
  return f;
}

bool is_dyadic(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) return false;
  int exp = 0;
  return std::frexp(v, &exp) == 0.5;
}

// Chains are enumerated one by one: levels [from, m] remain available and
// `remaining` values are still to be placed.
std::uint64_t count_chains(int from, int m, int remaining) {
  if (remaining == 0) return 1;
  std::uint64_t total = 0;
  for (int level = from; level <= m; ++level) total += count_chains(level, m, remaining - 1);
  return total;
}

bool iterates4_holds(double t, double alpha, double epsilon, int j_max, double log2_M) {
  const double M_eps = std::pow(2.0, log2_M * epsilon);
  for (int j = 1; j <= j_max; ++j) {
    const double lhs = std::pow(t * (alpha * log2_M + j), j) / factorial_d(j);
    if (lhs > M_eps) return false;
  }
  return true;
}

}  // namespace

ChainCount iterates3_check(int j, double M_low, double M_high) {
  if (j < 1 || j > 10) throw DomainError("chain length must lie in [1, 10]");
  if (!is_dyadic(M_low) || !is_dyadic(M_high))
    throw DomainError("chain endpoints must be dyadic");
  if (M_low > M_high) throw DomainError("chain endpoints must be ordered");
  const int m = static_cast<int>(std::lround(std::log2(M_high / M_low)));
  ChainCount out;
  out.chains = count_chains(0, m, j);
  out.bound = std::pow(static_cast<double>(m + j), j) / factorial_d(j);
  return out;
}

double iterates4_find_t(double alpha, double epsilon, int j_max, double M_max) {
  if (!(alpha > 0.0) || !(epsilon > 0.0)) throw DomainError("alpha and epsilon must be positive");
  if (j_max < 1 || j_max > 20) throw DomainError("j_max must lie in [1, 20]");
  if (!(M_max >= 1.0) || !std::isfinite(M_max)) throw DomainError("M_max must be at least 1");

  auto feasible = [&](double t) {
    for (double M = 1.0; M <= M_max; M *= 2.0)
      if (!iterates4_holds(t, alpha, epsilon, j_max, std::log2(M))) return false;
    return true;
  };

  // The M = 1 constraint forces (t j)^j <= j!, so feasibility fails for
  // large t and the bracket below terminates.
  double lo = 0.0;
  double hi = 1.0;
  while (feasible(hi)) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

bool iterates4_verify(double t, double alpha, double epsilon, int j_max, double M_max,
                      int refine) {
  if (refine < 1) throw DomainError("refinement factor must be positive");
  const double top = std::log2(M_max);
  for (int i = 0;; ++i) {
    const double log2_M = static_cast<double>(i) / refine;
    if (log2_M > top) break;
    if (!iterates4_holds(t, alpha, epsilon, j_max, log2_M)) return false;
  }
  return true;
}

double dyadic_min_sum(std::uint64_t N, double beta, double epsilon, double M_start,
                      double weight_exponent) {
  if (N < 2 || !is_power_of_two(N)) throw DomainError("N must be a power of two, at least 2");
  if (!(beta > 0.0) || beta > 1.0) throw DomainError("beta must lie in (0, 1]");
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (epsilon >= 0.5)
    throw DomainError("dyadic sum diverges: tail exponent -1 + 2 epsilon is nonnegative");
  if (!is_dyadic(M_start)) throw DomainError("M_start must be dyadic");
  if (!(weight_exponent >= 0.0)) throw DomainError("weight exponent must be nonnegative");

  const double n_power = std::pow(static_cast<double>(N), (weight_exponent + 1.0) * beta);
  double sum = 0.0;
  for (double M = M_start; M <= kDyadicCap; M *= 2.0) {
    const double tail = std::pow(M, -1.0 + 2.0 * epsilon) * n_power;
    const double head = std::pow(M, weight_exponent + 2.0 * epsilon);
    sum += std::min(tail, head);
  }
  return sum;
}

double dyadic_fit_exponent(double beta, double epsilon, double weight_exponent,
                           const std::vector<int>& n_exponents, double M_start) {
  if (n_exponents.size() < 2) throw DomainError("exponent fit needs at least two N values");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int p : n_exponents) {
    if (p < 1 || p > 62) throw DomainError("N exponent must lie in [1, 62]");
    const double x = static_cast<double>(p);
    const double y =
        std::log2(dyadic_min_sum(1ull << p, beta, epsilon, M_start, weight_exponent));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(n_exponents.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace gphl
