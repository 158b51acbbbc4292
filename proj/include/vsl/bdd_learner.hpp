#pragma once

// Diagram-side learner: encodes the hypothesis sub-space, the lexicographic
// term-order constraints and the per-sample consistency sets as diagrams over
// the 2nk slot bits, intersects them in a configurable order, and extracts
// cardinality and members from the resulting version-space diagram.

#include <functional>
#include <map>
#include <vector>

#include "vsl/bdd.hpp"
#include "vsl/core.hpp"

namespace vsl {

// A decoded bit pattern that the base space should have excluded.
class encoding_corruption : public error {
public:
  using error::error;
};

namespace bdd_learn {

// Two adjacent Boolean variables per slot x^j_i, feature-major then term:
// index(i, j, bit) = ((i*k) + j)*2 + bit with 0-based i, j. This keeps the
// two terms' copies of one feature adjacent, so the prefix-equality chains of
// the lexicographic constraint stay linear in the diagram.
struct encoding_layout {
  int n = 0;
  int k = 0;

  std::uint32_t variable_count() const { return static_cast<std::uint32_t>(2 * n * k); }

  std::uint32_t bit_index(int i, int j, int bit) const {
    return static_cast<std::uint32_t>(((i * k) + j) * 2 + bit);
  }
};

// Slot value codes: pos = 10, neg = 01, dcare = 00; 11 is excluded by the
// base space. (bit 0 is the first of the slot's two adjacent variables.)
inline bdd::handle slot_eq(bdd::manager& m, const encoding_layout& lay, int i, int j,
                             literal_state s) {
  const bdd::handle b0 = m.mk_var(lay.bit_index(i, j, 0));
  const bdd::handle b1 = m.mk_var(lay.bit_index(i, j, 1));
  switch (s) {
    case literal_state::pos:
      return m.apply_and(b0, m.negate(b1));
    case literal_state::neg:
      return m.apply_and(m.negate(b0), b1);
    case literal_state::dcare:
      return m.apply_and(m.negate(b0), m.negate(b1));
  }
  throw invalid_input("slot_eq: bad state");
}

// present(i,j) = slot holds a literal = bits differ (codes 10 / 01).
inline bdd::handle slot_present(bdd::manager& m, const encoding_layout& lay, int i, int j) {
  const bdd::handle b0 = m.mk_var(lay.bit_index(i, j, 0));
  const bdd::handle b1 = m.mk_var(lay.bit_index(i, j, 1));
  return m.negate(m.apply_xnor(b0, b1));
}

// Base hypothesis space: every slot restricted to its three valid codes;
// minterms are in bijection with k-term DNF representations. 3^(nk) minterms.
inline bdd::handle encode_base_space(bdd::manager& m, const encoding_layout& lay) {
  bdd::handle dd = m.mk_const(true);
  for (int j = 0; j < lay.k; ++j)
    for (int i = 0; i < lay.n; ++i) {
      const bdd::handle b0 = m.mk_var(lay.bit_index(i, j, 0));
      const bdd::handle b1 = m.mk_var(lay.bit_index(i, j, 1));
      dd = m.apply_and(dd, m.negate(m.apply_and(b0, b1)));  // exclude code 11
    }
  return dd;
}

// Exactly-l-literals sub-space via the running ">= w literals so far" chain
// lit_dd[0..l+1]; the exactly-l set is lit_dd[l] and not lit_dd[l+1]. The
// caller intersects with the base space (the chain alone also admits code 11,
// which counts as "present" by bit inequality -- base removes it).
inline bdd::handle encode_subspace(bdd::manager& m, const encoding_layout& lay, int l, int k) {
  if (k != lay.k) throw invalid_input("encode_subspace: layout/spec term count mismatch");
  if (l < k || l > lay.n * lay.k) throw invalid_input("encode_subspace: l out of range");
  std::vector<bdd::handle> lit_dd(static_cast<std::size_t>(l) + 2, m.mk_const(false));
  lit_dd[0] = m.mk_const(true);
  for (int j = 0; j < lay.k; ++j)
    for (int i = 0; i < lay.n; ++i) {
      const bdd::handle var_dd = slot_present(m, lay, i, j);
      for (int w = l + 1; w >= 1; --w)
        lit_dd[static_cast<std::size_t>(w)] =
            m.apply_or(lit_dd[static_cast<std::size_t>(w)],
                       m.apply_and(lit_dd[static_cast<std::size_t>(w) - 1], var_dd));
    }
  return m.apply_and(lit_dd[static_cast<std::size_t>(l)],
                     m.negate(lit_dd[static_cast<std::size_t>(l) + 1]));
}

// Hypotheses true on a positive sample: per term, every feature slot is
// don't-care or agrees with the sample bit; the term sets are OR-ed.
inline bdd::handle encode_positive_sample(bdd::manager& m, const encoding_layout& lay,
                                            const std::vector<std::uint8_t>& s) {
  if (static_cast<int>(s.size()) != lay.n)
    throw invalid_input("encode_positive_sample: sample width mismatch");
  bdd::handle dd = m.mk_const(false);
  for (int j = 0; j < lay.k; ++j) {
    bdd::handle term_dd = m.mk_const(true);
    for (int i = 0; i < lay.n; ++i) {
      const literal_state agree =
          s[static_cast<std::size_t>(i)] ? literal_state::pos : literal_state::neg;
      const bdd::handle allowed = m.apply_or(slot_eq(m, lay, i, j, agree),
                                               slot_eq(m, lay, i, j, literal_state::dcare));
      term_dd = m.apply_and(term_dd, allowed);
    }
    dd = m.apply_or(dd, term_dd);
  }
  return dd;
}

// Hypotheses false on a negative sample: every term carries at least one
// killing literal (a literal disagreeing with the sample bit).
inline bdd::handle encode_negative_sample(bdd::manager& m, const encoding_layout& lay,
                                            const std::vector<std::uint8_t>& s) {
  if (static_cast<int>(s.size()) != lay.n)
    throw invalid_input("encode_negative_sample: sample width mismatch");
  bdd::handle dd = m.mk_const(true);
  for (int j = 0; j < lay.k; ++j) {
    bdd::handle kill = m.mk_const(false);
    for (int i = 0; i < lay.n; ++i) {
      const literal_state killer =
          s[static_cast<std::size_t>(i)] ? literal_state::neg : literal_state::pos;
      kill = m.apply_or(kill, slot_eq(m, lay, i, j, killer));
    }
    dd = m.apply_and(dd, kill);
  }
  return dd;
}

// Strict lexicographic order between adjacent terms j and j+1 under
// neg < pos < dcare: some position i is strictly less while all earlier
// positions are equal. cond1/2/3 are the three strictly-less value pairs.
inline bdd::handle encode_lex_pair(bdd::manager& m, const encoding_layout& lay, int j) {
  if (j < 0 || j + 1 >= lay.k) throw invalid_input("encode_lex_pair: term index out of range");
  bdd::handle dd = m.mk_const(false);
  bdd::handle eq = m.mk_const(true);
  for (int i = 0; i < lay.n; ++i) {
    const bdd::handle a_neg = slot_eq(m, lay, i, j, literal_state::neg);
    const bdd::handle a_pos = slot_eq(m, lay, i, j, literal_state::pos);
    const bdd::handle b_pos = slot_eq(m, lay, i, j + 1, literal_state::pos);
    const bdd::handle b_dc = slot_eq(m, lay, i, j + 1, literal_state::dcare);
    const bdd::handle cond1 = m.apply_and(a_neg, b_pos);
    const bdd::handle cond2 = m.apply_and(a_neg, b_dc);
    const bdd::handle cond3 = m.apply_and(a_pos, b_dc);
    const bdd::handle less_here = m.apply_or(cond1, m.apply_or(cond2, cond3));
    dd = m.apply_or(dd, m.apply_and(eq, less_here));
    // Positionwise equality via bitwise equality of the two slot codes.
    const bdd::handle eq_b0 = m.apply_xnor(m.mk_var(lay.bit_index(i, j, 0)),
                                             m.mk_var(lay.bit_index(i, j + 1, 0)));
    const bdd::handle eq_b1 = m.apply_xnor(m.mk_var(lay.bit_index(i, j, 1)),
                                             m.mk_var(lay.bit_index(i, j + 1, 1)));
    eq = m.apply_and(eq, m.apply_and(eq_b0, eq_b1));
  }
  return dd;
}

// ===== Version-space assembly =====

struct build_options {
  enum class sample_policy { heuristic, pos_first, neg_first, custom };
  enum class constraint_position { before_samples, after_samples };

  sample_policy policy = sample_policy::heuristic;
  std::vector<std::size_t> custom_order;  // sample indices, used with `custom`
  constraint_position subspace_position = constraint_position::before_samples;

  // Benchmark/trace hook: called after each conjunction step with the node
  // count of the current version-space diagram (node_count walks the diagram,
  // so leave unset on hot paths).
  std::function<void(const std::string& step, std::size_t samples_done, std::size_t nodes)>
      trace;
};

struct build_result {
  bdd::handle diagram{};
  big_uint syntactic_count;  // minterms over the 2nk slot bits
};

// Conjunction order of the samples. The heuristic follows the measured rule:
// positives first for k <= 2, negatives first for k >= 3; within a class,
// dataset order.
inline std::vector<std::size_t> sample_order(const dataset& d, int k,
                                             const build_options& opt) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t idx = 0; idx < d.samples.size(); ++idx)
    (d.samples[idx].lab == label::positive ? pos : neg).push_back(idx);

  build_options::sample_policy pol = opt.policy;
  if (pol == build_options::sample_policy::custom) {
    if (opt.custom_order.size() != d.samples.size())
      throw invalid_input("build_version_space: custom order must permute all samples");
    return opt.custom_order;
  }
  if (pol == build_options::sample_policy::heuristic)
    pol = k <= 2 ? build_options::sample_policy::pos_first
                 : build_options::sample_policy::neg_first;

  std::vector<std::size_t> order;
  order.reserve(d.samples.size());
  const auto& first = pol == build_options::sample_policy::pos_first ? pos : neg;
  const auto& second = pol == build_options::sample_policy::pos_first ? neg : pos;
  order.insert(order.end(), first.begin(), first.end());
  order.insert(order.end(), second.begin(), second.end());
  return order;
}

inline build_result build_version_space(bdd::manager& m, const encoding_layout& lay,
                                        const dataset& d, subspace_spec spec,
                                        const build_options& opt = {}) {
  validate_dataset(d);
  if (d.n != lay.n || spec.k != lay.k)
    throw invalid_input("build_version_space: layout mismatch");

  const auto step = [&](const std::string& label, std::size_t done, bdd::handle dd) {
    if (opt.trace) opt.trace(label, done, m.node_count(dd));
  };

  bdd::handle dd = encode_base_space(m, lay);
  step("base", 0, dd);

  const auto conjoin_structure = [&](bdd::handle acc, std::size_t done) {
    acc = m.apply_and(acc, encode_subspace(m, lay, spec.l, spec.k));
    step("subspace", done, acc);
    for (int j = 0; j + 1 < lay.k; ++j) {
      acc = m.apply_and(acc, encode_lex_pair(m, lay, j));
      step("lex", done, acc);
    }
    return acc;
  };

  if (opt.subspace_position == build_options::constraint_position::before_samples)
    dd = conjoin_structure(dd, 0);

  std::size_t done = 0;
  for (std::size_t idx : sample_order(d, spec.k, opt)) {
    const sample& s = d.samples[idx];
    const bdd::handle sdd = s.lab == label::positive
                                  ? encode_positive_sample(m, lay, s.bits)
                                  : encode_negative_sample(m, lay, s.bits);
    dd = m.apply_and(dd, sdd);
    ++done;
    step(s.lab == label::positive ? "pos_sample" : "neg_sample", done, dd);
  }

  if (opt.subspace_position == build_options::constraint_position::after_samples)
    dd = conjoin_structure(dd, done);

  build_result res;
  res.diagram = dd;
  res.syntactic_count = m.count_minterms(dd, lay.variable_count());
  return res;
}

// ===== Extraction =====

inline hypothesis decode_minterm(const std::vector<std::uint8_t>& assignment,
                                 const encoding_layout& lay) {
  if (assignment.size() != lay.variable_count())
    throw invalid_input("decode_minterm: assignment width mismatch");
  hypothesis h;
  h.n = lay.n;
  h.terms.assign(static_cast<std::size_t>(lay.k),
                 term(static_cast<std::size_t>(lay.n), literal_state::dcare));
  for (int j = 0; j < lay.k; ++j)
    for (int i = 0; i < lay.n; ++i) {
      const std::uint8_t b0 = assignment[lay.bit_index(i, j, 0)];
      const std::uint8_t b1 = assignment[lay.bit_index(i, j, 1)];
      literal_state s;
      if (b0 && !b1) s = literal_state::pos;
      else if (!b0 && b1) s = literal_state::neg;
      else if (!b0 && !b1) s = literal_state::dcare;
      else throw encoding_corruption("decode_minterm: slot code 11 escaped the base space");
      h.terms[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = s;
    }
  return h;
}

// Boolean-function diagram of a hypothesis over the n feature variables;
// canonical within the given manager, the semantic-deduplication fingerprint.
inline bdd::handle function_diagram(bdd::manager& fm, const hypothesis& h) {
  validate_hypothesis(h);
  bdd::handle dd = fm.mk_const(false);
  for (const term& t : h.terms) {
    bdd::handle td = fm.mk_const(true);
    for (int i = 0; i < h.n; ++i) {
      const literal_state s = t[static_cast<std::size_t>(i)];
      if (s == literal_state::dcare) continue;
      const bdd::handle v = fm.mk_var(static_cast<std::uint32_t>(i));
      td = fm.apply_and(td, s == literal_state::pos ? v : fm.negate(v));
    }
    dd = fm.apply_or(dd, td);
  }
  return dd;
}

struct semantic_count {
  enum class kind { exact, greater_than_cap };
  kind outcome = kind::exact;
  big_uint syntactic_count;
  big_uint semantic_cardinality;          // meaningful when outcome == exact
  long cap = 0;                           // echoed when outcome == greater_than_cap
  std::vector<hypothesis> members;        // up to `max_members` class representatives
};

// Counts semantic classes of the version-space diagram. Enumeration happens
// only below the cap; each decoded representation is fingerprinted by its
// Boolean-function diagram in a fresh manager and duplicates collapse.
inline semantic_count semantic_cardinality(bdd::manager& m, bdd::handle vs,
                                           const encoding_layout& lay, long enum_cap,
                                           std::size_t max_members) {
  semantic_count out;
  out.syntactic_count = m.count_minterms(vs, lay.variable_count());
  if (out.syntactic_count > enum_cap) {
    out.outcome = semantic_count::kind::greater_than_cap;
    out.cap = enum_cap;
    return out;
  }
  const auto syn = static_cast<std::size_t>(out.syntactic_count);
  const auto enumd = m.enumerate_minterms(vs, lay.variable_count(), syn);

  bdd::manager fm(static_cast<std::uint32_t>(lay.n));
  // fingerprint -> index into members (npos once the member cap is hit).
  std::map<bdd::handle, std::size_t> classes;
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  for (const auto& assignment : enumd.assignments) {
    const hypothesis h = decode_minterm(assignment, lay);
    const bdd::handle fingerprint = function_diagram(fm, h);
    hypothesis sorted = canonical_term_sort(h);
    const auto [it, fresh] =
        classes.emplace(fingerprint, out.members.size() < max_members ? out.members.size() : npos);
    if (fresh) {
      if (it->second != npos) out.members.push_back(std::move(sorted));
    } else if (it->second != npos &&
               to_string(sorted) < to_string(out.members[it->second])) {
      // Keep the string-least representative so every engine reports the
      // same member for a semantic class.
      out.members[it->second] = std::move(sorted);
    }
  }
  out.semantic_cardinality = classes.size();
  std::sort(out.members.begin(), out.members.end(),
            [](const hypothesis& a, const hypothesis& b) { return to_string(a) < to_string(b); });
  return out;
}

}  // namespace bdd_learn
}  // namespace vsl
