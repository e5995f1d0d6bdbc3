#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gphl/common.hpp"

namespace gphl {

// Collapsing history mu : {k+1, ..., k+q} -> {k, ..., k+q-1} with
// mu(k+1) = k and mu(l) < l for every l. Stored as mu[j] = mu(k+1+j).
struct CollapsingMap {
  int k = 1;
  int q = 0;
  std::vector<int> mu;
};

bool is_admissible(const CollapsingMap& m);

// All admissible maps in lexicographic mu order. Count is q! for q >= 1 and
// 1 for q = 0; q > 8 is refused, naming the count it would have produced.
std::vector<CollapsingMap> enumerate_maps(int k, int q);

// Elementary move at position l (k+1 < l < k+q): exchange the roles of
// columns l and l+1, i.e. conjugate mu by the transposition (l, l+1).
// Allowed exactly when mu(l+1) != l, which keeps the result admissible.
bool move_allowed(const CollapsingMap& m, int l);
CollapsingMap apply_move(const CollapsingMap& m, int l);

// Lexicographically least member of the move orbit of m; idempotent and
// constant on orbits.
CollapsingMap canonicalize(const CollapsingMap& m);

// Breadth-first closure of m under elementary moves, in lexicographic order.
std::vector<CollapsingMap> orbit_of(const CollapsingMap& m);

struct EquivalenceClass {
  CollapsingMap representative;
  std::size_t member_count = 0;
};

// Partition of the admissible set into move orbits; representatives are the
// canonical forms, listed in lexicographic order.
std::vector<EquivalenceClass> equivalence_classes(int k, int q);

std::size_t class_count(int k, int q);

// One-line display, e.g. "k=2 q=3 mu=[2 2 4]".
std::string format_map(const CollapsingMap& m);

}  // namespace gphl
