#pragma once

#include <cstdint>
#include <vector>

#include "gphl/common.hpp"

namespace gphl {

// Exhaustive count of nondecreasing dyadic chains
//   M_low <= M_1 <= ... <= M_j <= M_high
// (j free values between fixed dyadic endpoints) against the bound
// (log2(M_high/M_low) + j)^j / j!.
struct ChainCount {
  std::uint64_t chains = 0;
  double bound = 0.0;
};

ChainCount iterates3_check(int j, double M_low, double M_high);

// Largest t with t^j (alpha log2 M + j)^j / j! <= M^epsilon for every
// 1 <= j <= j_max and every dyadic M in [1, M_max], found by bisection.
double iterates4_find_t(double alpha, double epsilon, int j_max, double M_max);

// Re-check a candidate t on a grid refined `refine`-fold in the dyadic
// exponent (M = 2^{i/refine}).
bool iterates4_verify(double t, double alpha, double epsilon, int j_max, double M_max,
                      int refine);

// Sum over dyadic M = M_start, 2 M_start, ... up to the 2^40 cap of
//   min(M^{-1+2eps} N^{(w+1)beta}, M^{w+2eps}),
// w the weight exponent (0 for the kinetic form, 2 for the two-derivative
// form). The neglected tail beyond the cap is below the last term times
// r/(1-r) with r = 2^{-1+2eps}.
double dyadic_min_sum(std::uint64_t N, double beta, double epsilon, double M_start,
                      double weight_exponent);

// Least squares slope of log2(sum) against log2(N) over N = 2^p for the
// listed exponents p.
double dyadic_fit_exponent(double beta, double epsilon, double weight_exponent,
                           const std::vector<int>& n_exponents, double M_start);

}  // namespace gphl
