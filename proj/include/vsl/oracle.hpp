#pragma once

// Brute-force ground truth for tests and acceptance checks. Deliberately
// independent of the diagram and CNF engines: hypotheses are enumerated
// syntactically, filtered by direct evaluation, and grouped by truth table.
// Guarded to small dimensions; never used by the learner itself.

#include <cstdint>
#include <map>
#include <vector>

#include "vsl/core.hpp"

namespace vsl::oracle {

namespace detail {

// All terms with exactly c literals over n features, ascending by term_less.
inline std::vector<term> terms_with_count(int n, int c) {
  std::vector<term> out;
  term t(static_cast<std::size_t>(n), literal_state::dcare);
  // Recursive descent over features keeps generation in canonical order
  // because neg < pos < dcare matches the recursion's branch order only
  // partially; a final sort makes the order explicit instead of implicit.
  auto rec = [&](auto&& self, int feat, int left) -> void {
    if (left == 0) {
      out.push_back(t);
      return;
    }
    if (feat >= n || n - feat < left) return;
    t[static_cast<std::size_t>(feat)] = literal_state::neg;
    self(self, feat + 1, left - 1);
    t[static_cast<std::size_t>(feat)] = literal_state::pos;
    self(self, feat + 1, left - 1);
    t[static_cast<std::size_t>(feat)] = literal_state::dcare;
    self(self, feat + 1, left);
  };
  rec(rec, 0, c);
  std::sort(out.begin(), out.end(), term_less);
  return out;
}

}  // namespace detail

// Every member of the sub-space: exactly l literals total over exactly k
// terms, adjacent terms strictly increasing. Terms may be empty (all-dcare)
// when the literal split leaves them so; strictness allows at most one.
inline std::vector<hypothesis> enumerate_hypotheses(int n, subspace_spec spec) {
  if (n < 1 || spec.l < 1 || spec.k < 1) throw invalid_input("oracle: bad dimensions");
  if (n * spec.k > 20) throw invalid_input("oracle: n*k too large for brute force");

  // Term candidates per literal count, built once.
  std::vector<std::vector<term>> by_count(static_cast<std::size_t>(std::min(spec.l, n)) + 1);
  for (int c = 0; c <= std::min(spec.l, n); ++c)
    by_count[static_cast<std::size_t>(c)] = detail::terms_with_count(n, c);

  std::vector<hypothesis> out;
  std::vector<term> chosen;
  auto rec = [&](auto&& self, int j, int left) -> void {
    if (j == spec.k) {
      if (left == 0) out.push_back(hypothesis{n, chosen});
      return;
    }
    const int remaining_terms = spec.k - j - 1;
    for (int c = 0; c <= std::min(left, n); ++c) {
      if (left - c > remaining_terms * n) continue;
      for (const term& t : by_count[static_cast<std::size_t>(c)]) {
        if (!chosen.empty() && !term_less(chosen.back(), t)) continue;
        chosen.push_back(t);
        self(self, j + 1, left - c);
        chosen.pop_back();
      }
    }
  };
  rec(rec, 0, spec.l);
  return out;
}

struct version_space {
  std::vector<hypothesis> syntactic_members;   // consistent, enumeration order
  std::vector<hypothesis> class_reps;          // first member of each class
  std::vector<std::vector<bool>> class_tables; // parallel to class_reps
  std::size_t class_count = 0;                 // semantic cardinality
};

// Filters the sub-space against the dataset and groups the survivors by
// truth table. Guarded by the enumeration bound above plus a table bound.
inline version_space compute_version_space(const dataset& d, subspace_spec spec) {
  validate_dataset(d);
  if (d.n > 16) throw invalid_input("oracle: n too large for truth tables");
  version_space vs;
  std::map<std::vector<bool>, std::size_t> classes;
  for (hypothesis& h : enumerate_hypotheses(d.n, spec)) {
    bool ok = true;
    for (const sample& s : d.samples) {
      if (evaluate(h, s.bits) != (s.lab == label::positive)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    std::vector<bool> tt = truth_table(h);
    auto [it, fresh] = classes.emplace(std::move(tt), classes.size());
    if (fresh) {
      vs.class_reps.push_back(h);
      vs.class_tables.push_back(it->first);
    } else if (to_string(h) < to_string(vs.class_reps[it->second])) {
      // Canonical representative: the string-least member of the class,
      // matching what the engines report.
      vs.class_reps[it->second] = h;
    }
    vs.syntactic_members.push_back(std::move(h));
  }
  vs.class_count = classes.size();
  return vs;
}

}  // namespace vsl::oracle
