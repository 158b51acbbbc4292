#pragma once

// Core model types shared by every engine: hypotheses (k-term DNF over fixed
// binary features), datasets, sub-space coordinates and the complexity order,
// plus the canonical textual hypothesis format.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace vsl {

// ===== Errors =====

class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed caller input: bad dimensions, out-of-range indices, invalid config.
class invalid_input : public error {
public:
  using error::error;
};

// Text that does not conform to a grammar (hypothesis strings, CSV cells).
class parse_error : public error {
public:
  using error::error;
};

// A configured resource budget (node count, conflict count, draw bound) was hit.
class resource_limit : public error {
public:
  using error::error;
};

// An in-flight operation observed its cancellation flag (race loser).
class cancelled : public error {
public:
  using error::error;
};

// External process / environment failure (solver subprocess, I/O).
class backend_error : public error {
public:
  using error::error;
};

// ===== Hypotheses =====

// Per-feature slot state of one term. A term is a conjunction; `dcare` means
// the feature does not occur in it. Numeric values fix the canonical order
// neg < pos < dcare used everywhere (term sorting, lexicographic constraints).
enum class literal_state : std::uint8_t { neg = 0, pos = 1, dcare = 2 };

// One conjunction, positionally: entry i is the state of feature i (0-based).
using term = std::vector<literal_state>;

// k-term DNF over n features. Terms are OR-ed; an all-dcare term is the
// constant-true conjunction (prints as "1").
struct hypothesis {
  int n = 0;
  std::vector<term> terms;
};

inline void validate_hypothesis(const hypothesis& h) {
  if (h.n < 1) throw invalid_input("hypothesis: feature count must be >= 1");
  if (h.terms.empty()) throw invalid_input("hypothesis: needs at least one term");
  for (const term& t : h.terms)
    if (static_cast<int>(t.size()) != h.n)
      throw invalid_input("hypothesis: term width differs from feature count");
}

// Total number of literals over all terms (the l of the sub-space the
// hypothesis lives in).
inline int literal_count(const hypothesis& h) {
  int c = 0;
  for (const term& t : h.terms)
    for (literal_state s : t)
      if (s != literal_state::dcare) ++c;
  return c;
}

inline bool term_true_on(const term& t, const std::vector<std::uint8_t>& bits) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == literal_state::dcare) continue;
    const bool want = t[i] == literal_state::pos;
    if ((bits[i] != 0) != want) return false;
  }
  return true;
}

// DNF evaluation: true iff some term is satisfied.
inline bool evaluate(const hypothesis& h, const std::vector<std::uint8_t>& bits) {
  if (static_cast<int>(bits.size()) != h.n)
    throw invalid_input("evaluate: sample width differs from hypothesis feature count");
  for (const term& t : h.terms)
    if (term_true_on(t, bits)) return true;
  return false;
}

// ===== Canonical term order =====

// Positionwise lexicographic comparison under neg < pos < dcare; this is the
// strict order the lexicographic constraints enforce between adjacent terms.
inline bool term_less(const term& a, const term& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](literal_state x, literal_state y) {
                                        return static_cast<int>(x) < static_cast<int>(y);
                                      });
}

// Sorts terms into canonical ascending order. Duplicate terms are refused:
// a hypothesis with two equal conjunctions is not a member of any sub-space.
inline hypothesis canonical_term_sort(const hypothesis& h) {
  validate_hypothesis(h);
  hypothesis out = h;
  std::sort(out.terms.begin(), out.terms.end(), term_less);
  for (std::size_t i = 1; i < out.terms.size(); ++i)
    if (out.terms[i - 1] == out.terms[i])
      throw invalid_input("canonical_term_sort: duplicate term");
  return out;
}

// ===== Textual form =====

// Canonical writer: literals "x<i>"/"~x<i>" (1-based, ascending) joined by
// '&', terms joined by " + ", the empty conjunction written "1".
inline std::string term_to_string(const term& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == literal_state::dcare) continue;
    if (!s.empty()) s += '&';
    if (t[i] == literal_state::neg) s += '~';
    s += 'x';
    s += std::to_string(i + 1);
  }
  return s.empty() ? std::string("1") : s;
}

inline std::string to_string(const hypothesis& h) {
  std::string s;
  for (std::size_t j = 0; j < h.terms.size(); ++j) {
    if (j) s += " + ";
    s += term_to_string(h.terms[j]);
  }
  return s;
}

// Parser for the same grammar, relaxed on separators: '&' between literals is
// optional, '+' and '|' both split terms, whitespace is insignificant.
inline hypothesis parse_hypothesis(const std::string& text, int n) {
  if (n < 1) throw invalid_input("parse_hypothesis: feature count must be >= 1");
  hypothesis h;
  h.n = n;
  std::size_t p = 0;
  auto skip_ws = [&] {
    while (p < text.size() && (text[p] == ' ' || text[p] == '\t')) ++p;
  };
  auto fail = [&](const std::string& what) -> void {
    throw parse_error("hypothesis: " + what + " at position " + std::to_string(p));
  };

  while (true) {
    term t(static_cast<std::size_t>(n), literal_state::dcare);
    bool term_is_one = false;
    bool saw_literal = false;
    skip_ws();
    if (p < text.size() && text[p] == '1') {
      ++p;
      term_is_one = true;
    } else {
      while (true) {
        skip_ws();
        if (p >= text.size() || text[p] == '+' || text[p] == '|') break;
        if (text[p] == '&') {
          if (!saw_literal) fail("unexpected '&'");
          ++p;
          skip_ws();
        }
        bool negated = false;
        if (p < text.size() && text[p] == '~') {
          negated = true;
          ++p;
          skip_ws();
        }
        if (p >= text.size() || text[p] != 'x') fail("expected literal");
        ++p;
        std::size_t d0 = p;
        while (p < text.size() && std::isdigit(static_cast<unsigned char>(text[p]))) ++p;
        if (d0 == p) fail("expected feature index");
        long idx = std::stol(text.substr(d0, p - d0));
        if (idx < 1 || idx > n) fail("feature index out of range");
        literal_state& slot = t[static_cast<std::size_t>(idx - 1)];
        if (slot != literal_state::dcare) fail("feature repeated in term");
        slot = negated ? literal_state::neg : literal_state::pos;
        saw_literal = true;
      }
      if (!saw_literal) fail("empty term");
    }
    (void)term_is_one;
    h.terms.push_back(std::move(t));
    skip_ws();
    if (p >= text.size()) break;
    if (text[p] != '+' && text[p] != '|') fail("expected term separator");
    ++p;
  }
  validate_hypothesis(h);
  return h;
}

// Semantic fingerprint: row r assigns feature i the bit (r >> i) & 1.
// Guarded to small n; used for oracle grouping and test comparisons.
inline std::vector<bool> truth_table(const hypothesis& h, int max_n = 20) {
  validate_hypothesis(h);
  if (h.n > max_n) throw invalid_input("truth_table: feature count too large");
  const std::size_t rows = std::size_t{1} << h.n;
  std::vector<bool> tt(rows);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(h.n));
  for (std::size_t r = 0; r < rows; ++r) {
    for (int i = 0; i < h.n; ++i) bits[static_cast<std::size_t>(i)] = (r >> i) & 1u;
    tt[r] = evaluate(h, bits);
  }
  return tt;
}

// ===== Datasets =====

enum class label : std::uint8_t { negative = 0, positive = 1 };

struct sample {
  std::vector<std::uint8_t> bits;  // entries 0/1
  label lab = label::negative;
};

struct dataset {
  int n = 0;
  std::vector<sample> samples;

  std::size_t count(label l) const {
    std::size_t c = 0;
    for (const sample& s : samples)
      if (s.lab == l) ++c;
    return c;
  }
  std::size_t m_pos() const { return count(label::positive); }
  std::size_t m_neg() const { return count(label::negative); }
};

inline void validate_dataset(const dataset& d) {
  if (d.n < 1) throw invalid_input("dataset: feature count must be >= 1");
  for (const sample& s : d.samples) {
    if (static_cast<int>(s.bits.size()) != d.n)
      throw invalid_input("dataset: sample width differs from feature count");
    for (std::uint8_t b : s.bits)
      if (b > 1) throw invalid_input("dataset: sample bits must be 0/1");
  }
}

// A vector labeled both positive and negative makes every sub-space empty;
// the search reports it as its own outcome instead of running.
inline std::optional<std::vector<std::uint8_t>> find_conflict(const dataset& d) {
  std::set<std::vector<std::uint8_t>> pos;
  for (const sample& s : d.samples)
    if (s.lab == label::positive) pos.insert(s.bits);
  for (const sample& s : d.samples)
    if (s.lab == label::negative && pos.count(s.bits)) return s.bits;
  return std::nullopt;
}

// ===== Sub-spaces and the complexity order =====

// Coordinates of one sub-space: hypotheses with exactly l literals spread over
// exactly k ordered terms.
struct subspace_spec {
  int l = 0;
  int k = 0;
  friend bool operator==(const subspace_spec&, const subspace_spec&) = default;
  friend auto operator<=>(const subspace_spec&, const subspace_spec&) = default;
};

// All (l, k) with l <= l_max, k <= min(l, k_max), ordered by l then k.
// k > l never appears: some term would have to be empty and the same
// hypothesis already lives in a smaller sub-space.
inline std::vector<subspace_spec> complexity_order(int l_max, int k_max) {
  if (l_max < 1 || k_max < 1) throw invalid_input("complexity_order: bounds must be >= 1");
  std::vector<subspace_spec> order;
  for (int l = 1; l <= l_max; ++l)
    for (int k = 1; k <= std::min(l, k_max); ++k)
      order.push_back({l, k});
  return order;
}

// ===== Learner configuration =====

enum class engine_kind : std::uint8_t { bdd, sat, race };
enum class overfit_policy : std::uint8_t { fail, continue_search };

struct learner_config {
  int l_max = 0;
  int k_max = 0;
  int bound_b = 10;                       // version-space cardinality bound B
  engine_kind engine = engine_kind::race;
  overfit_policy on_overfit = overfit_policy::fail;
  long enum_cap = 0;                      // 0 = default max(1000, 10*B)
  std::uint64_t seed = 0;                 // reserved for randomized strategies
  std::string external_solver_cmd;        // empty = embedded solver

  // Per-sub-space resource budgets; 0 = unlimited.
  std::int64_t max_conflicts = 0;         // SAT engine, per sub-space
  std::size_t max_bdd_nodes = 8'000'000;  // BDD manager allocation cap

  long effective_enum_cap() const {
    return enum_cap > 0 ? enum_cap : std::max(1000L, 10L * bound_b);
  }
};

inline void validate_config(const learner_config& c) {
  if (c.l_max < 1 || c.k_max < 1)
    throw invalid_input("config: l_max and k_max must be >= 1");
  if (c.k_max > c.l_max)
    throw invalid_input("config: k_max must not exceed l_max");
  if (c.bound_b < 1) throw invalid_input("config: bound B must be >= 1");
  if (c.enum_cap < 0) throw invalid_input("config: enum_cap must be >= 0");
}

}  // namespace vsl
