#include "gphl/lexpand.hpp"

#include "gphl/common.hpp"

namespace gphl {

std::vector<LMonomial> expand_L(int k, int l) {
  if (k < 1) throw DomainError("expansion order must be at least 1");
  if (l < 1 || l > k) throw DomainError("collapsing index must lie in [1, k]");
  if (k > 12) throw DomainError("expansion order above 12 refused (2^{2k-1} monomials)");

  // Slot order: x_1, x_1', x_2, x_2', ... with the unprimed slot l removed.
  std::vector<LFactor> slots;
  slots.reserve(static_cast<std::size_t>(2 * k - 1));
  for (int j = 1; j <= k; ++j) {
    if (j != l) slots.push_back({j, false});
    slots.push_back({j, true});
  }

  std::size_t count = (std::size_t{1} << slots.size()) - 1;
  std::vector<LMonomial> out;
  out.reserve(count);
  for (std::size_t mask = 1; mask <= count; ++mask) {
    LMonomial m;
    int bits = 0;
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (mask & (std::size_t{1} << s)) {
        m.factors.push_back(slots[s]);
        ++bits;
      }
    m.sign = (bits % 2 == 0) ? 1 : -1;
    m.sigma = m.factors.front();
    out.push_back(std::move(m));
  }
  return out;
}

double evaluate_L(const std::vector<LMonomial>& monomials,
                  const std::function<double(const LFactor&)>& w_at) {
  double total = 0.0;
  for (const LMonomial& m : monomials) {
    double prod = static_cast<double>(m.sign);
    for (const LFactor& f : m.factors) prod *= w_at(f);
    total += prod;
  }
  return total;
}

}  // namespace gphl
