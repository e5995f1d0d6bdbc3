#pragma once

#include <functional>
#include <vector>

namespace gphl {

// One slot of the localization expansion: the pair factor w(x_j - x_{k+1})
// (primed: w(x_j' - x_{k+1})) linking particle j to the collapsed variable.
struct LFactor {
  int j = 0;
  bool primed = false;
};

// Signed monomial from expanding
//   L_{l,k+1} = g(x_l' - x_{k+1}) prod_{j != l} g(x_j - x_{k+1}) g(x_j' - x_{k+1}) - 1
// with g = 1 - w into a polynomial in the w slots. sigma tags the leading
// factor; the unprimed slot l never appears (it is divided out), so sigma is
// some x_j or x_j' other than x_l.
struct LMonomial {
  int sign = 1;
  std::vector<LFactor> factors;
  LFactor sigma;
};

// Full binomial expansion over the 2k-1 slots: 2^{2k-1} - 1 monomials, each
// with at least one w factor, in deterministic subset order.
std::vector<LMonomial> expand_L(int k, int l);

// Signed sum of the monomials at the given slot values. Adding 1 reproduces
// the product of the g factors.
double evaluate_L(const std::vector<LMonomial>& monomials,
                  const std::function<double(const LFactor&)>& w_at);

}  // namespace gphl
