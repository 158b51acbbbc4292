#pragma once

// CNF plumbing shared by the SAT route: formula container, the variable map
// laying out the X / counter / per-sample blocks, and a DIMACS writer.

#include <cstdint>
#include <ostream>
#include <vector>

#include "vsl/core.hpp"

namespace vsl::sat {

// DIMACS-style literal: +v or -v, v >= 1.
using lit = std::int32_t;

struct cnf_formula {
  int var_count = 0;
  std::vector<std::vector<lit>> clauses;

  int new_var() { return ++var_count; }

  void add_clause(std::vector<lit> c) {
    if (c.empty()) throw invalid_input("cnf: empty clause");
    for (lit x : c) {
      const int v = x > 0 ? x : -x;
      if (x == 0 || v > var_count)
        throw invalid_input("cnf: literal outside declared variable range");
    }
    clauses.push_back(std::move(c));
  }

  std::size_t clause_count() const { return clauses.size(); }
};

// Variable layout for one sub-space instance.
//
//   X block    vars 1 .. 3nk           X(j,i,d): term j, feature i, d in {1,2,3}
//                                      (1 = negated form, 2 = positive form, 3 = absent)
//   S block    next l*(nk-1) vars      S(i,r): sequential-counter register,
//                                      "at least r of the first i slots are present"
//   A block    next k*m_pos vars       A(t,j): term j true on positive sample t
//
// Lexicographic auxiliaries are allocated on top via cnf_formula::new_var.
struct var_map {
  int n = 0, k = 0, l = 0, m_pos = 0;

  var_map(int n_, int k_, int l_, int m_pos_) : n(n_), k(k_), l(l_), m_pos(m_pos_) {
    if (n < 1 || k < 1 || l < 1 || m_pos < 0) throw invalid_input("var_map: bad dimensions");
    if (k > l || l > n * k) throw invalid_input("var_map: need k <= l <= n*k");
  }

  int slot_count() const { return n * k; }
  int x_vars() const { return 3 * n * k; }
  int s_vars() const { return l * (n * k - 1); }
  int a_vars() const { return k * m_pos; }
  int base_vars() const { return x_vars() + s_vars() + a_vars(); }

  // j in 1..k, i in 1..n, d in 1..3
  int X(int j, int i, int d) const {
    check(j >= 1 && j <= k && i >= 1 && i <= n && d >= 1 && d <= 3, "X index");
    return ((j - 1) * n + (i - 1)) * 3 + d;
  }

  // i in 1..nk-1 (slot prefix length), r in 1..l (count threshold)
  int S(int i, int r) const {
    check(i >= 1 && i <= n * k - 1 && r >= 1 && r <= l, "S index");
    return x_vars() + (r - 1) * (n * k - 1) + i;
  }

  // t in 0..m_pos-1 (positive sample), j in 1..k
  int A(int t, int j) const {
    check(t >= 0 && t < m_pos && j >= 1 && j <= k, "A index");
    return x_vars() + s_vars() + t * k + j;
  }

  // Slot order used by the counter: term-major, matching the X block layout.
  // slot index in 1..nk for (j,i).
  int slot(int j, int i) const {
    check(j >= 1 && j <= k && i >= 1 && i <= n, "slot index");
    return (j - 1) * n + i;
  }

 private:
  static void check(bool ok, const char* what) {
    if (!ok) throw invalid_input(std::string("var_map: ") + what + " out of range");
  }
};

inline void write_dimacs(std::ostream& os, const cnf_formula& f) {
  os << "p cnf " << f.var_count << ' ' << f.clauses.size() << '\n';
  for (const auto& c : f.clauses) {
    for (lit x : c) os << x << ' ';
    os << "0\n";
  }
}

}  // namespace vsl::sat
