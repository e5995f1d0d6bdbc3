#include "gphl/boardgame.hpp"

#include <deque>
#include <set>
#include <utility>

namespace gphl {

namespace {

double factorial_d(int q) {
  double f = 1.0;
  for (int i = 2; i <= q; ++i) f *= i;
  return f;
}

void require_admissible(const CollapsingMap& m) {
  if (!is_admissible(m)) throw DomainError("collapsing map is not admissible");
}

}  // namespace

bool is_admissible(const CollapsingMap& m) {
  if (m.k < 1 || m.q < 0) return false;
  if (static_cast<int>(m.mu.size()) != m.q) return false;
  for (int j = 0; j < m.q; ++j) {
    const int l = m.k + 1 + j;
    const int v = m.mu[static_cast<std::size_t>(j)];
    if (j == 0 && v != m.k) return false;
    if (v < m.k || v >= l) return false;
  }
  return true;
}

std::vector<CollapsingMap> enumerate_maps(int k, int q) {
  if (k < 1) throw DomainError("base order k must be at least 1");
  if (q < 0) throw DomainError("depth q must be nonnegative");
  if (q > 8) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "map enumeration refused: q = %d would produce %.17g maps",
                  q, factorial_d(q));
    throw DomainError(buf);
  }
  std::vector<CollapsingMap> out;
  CollapsingMap m{k, q, std::vector<int>(static_cast<std::size_t>(q), k)};
  if (q == 0) {
    out.push_back(m);
    return out;
  }
  // Odometer over positions k+2..k+q, last position fastest: lexicographic.
  while (true) {
    out.push_back(m);
    int j = q - 1;
    while (j >= 1) {
      const int l = k + 1 + j;
      if (m.mu[static_cast<std::size_t>(j)] + 1 < l) {
        ++m.mu[static_cast<std::size_t>(j)];
        break;
      }
      m.mu[static_cast<std::size_t>(j)] = k;
      --j;
    }
    if (j < 1) break;
  }
  return out;
}

bool move_allowed(const CollapsingMap& m, int l) {
  require_admissible(m);
  if (l <= m.k + 1 || l >= m.k + m.q) return false;
  return m.mu[static_cast<std::size_t>(l - m.k)] != l;
}

CollapsingMap apply_move(const CollapsingMap& m, int l) {
  if (!move_allowed(m, l)) throw DomainError("move is not allowed at this position");
  CollapsingMap out = m;
  const std::size_t il = static_cast<std::size_t>(l - m.k - 1);
  out.mu[il] = m.mu[il + 1];
  out.mu[il + 1] = m.mu[il];
  for (int& v : out.mu) {
    if (v == l)
      v = l + 1;
    else if (v == l + 1)
      v = l;
  }
  return out;
}

namespace {

// Breadth-first closure of the move relation; lex order via the set.
std::set<std::vector<int>> orbit_closure(const CollapsingMap& m) {
  std::set<std::vector<int>> seen{m.mu};
  std::deque<std::vector<int>> queue{m.mu};
  CollapsingMap cur = m;
  while (!queue.empty()) {
    cur.mu = std::move(queue.front());
    queue.pop_front();
    for (int l = m.k + 2; l < m.k + m.q; ++l) {
      if (!move_allowed(cur, l)) continue;
      std::vector<int> next = apply_move(cur, l).mu;
      if (seen.insert(next).second) queue.push_back(std::move(next));
    }
  }
  return seen;
}

}  // namespace

CollapsingMap canonicalize(const CollapsingMap& m) {
  require_admissible(m);
  return CollapsingMap{m.k, m.q, *orbit_closure(m).begin()};
}

std::vector<CollapsingMap> orbit_of(const CollapsingMap& m) {
  require_admissible(m);
  std::vector<CollapsingMap> out;
  for (const std::vector<int>& mu : orbit_closure(m)) out.push_back(CollapsingMap{m.k, m.q, mu});
  return out;
}

std::vector<EquivalenceClass> equivalence_classes(int k, int q) {
  std::vector<CollapsingMap> all = enumerate_maps(k, q);
  std::set<std::vector<int>> assigned;
  std::vector<EquivalenceClass> out;
  for (const CollapsingMap& m : all) {
    if (assigned.count(m.mu)) continue;
    std::set<std::vector<int>> orb = orbit_closure(m);
    EquivalenceClass c;
    // First unassigned map in lex enumeration order is its orbit's least.
    c.representative = CollapsingMap{k, q, *orb.begin()};
    c.member_count = orb.size();
    for (const std::vector<int>& mu : orb) assigned.insert(mu);
    out.push_back(std::move(c));
  }
  return out;
}

std::size_t class_count(int k, int q) { return equivalence_classes(k, q).size(); }

std::string format_map(const CollapsingMap& m) {
  std::string s = "k=" + std::to_string(m.k) + " q=" + std::to_string(m.q) + " mu=[";
  for (std::size_t j = 0; j < m.mu.size(); ++j) {
    if (j) s += ' ';
    s += std::to_string(m.mu[j]);
  }
  s += ']';
  return s;
}

}  // namespace gphl
