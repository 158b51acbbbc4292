#include <catch2/catch_amalgamated.hpp>

#include "vsl/core.hpp"
#include "vsl/rng.hpp"

using namespace vsl;

namespace {

term make_term(int n, std::initializer_list<std::pair<int, literal_state>> lits) {
  term t(static_cast<std::size_t>(n), literal_state::dcare);
  for (auto [i, s] : lits) t[static_cast<std::size_t>(i - 1)] = s;
  return t;
}

hypothesis hyp(int n, std::initializer_list<term> ts) { return hypothesis{n, {ts}}; }

constexpr auto pos = literal_state::pos;
constexpr auto neg = literal_state::neg;

term random_term(int n, int max_lits, xoshiro256ss& rng) {
  term t(static_cast<std::size_t>(n), literal_state::dcare);
  const int c = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_lits) + 1));
  for (int i = 0; i < c; ++i) {
    auto f = rng.below(static_cast<std::uint64_t>(n));
    t[f] = rng.coin() ? literal_state::pos : literal_state::neg;
  }
  return t;
}

hypothesis random_hypothesis(int n, int max_k, int max_lits, xoshiro256ss& rng) {
  hypothesis h;
  h.n = n;
  const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_k)));
  for (int j = 0; j < k; ++j) h.terms.push_back(random_term(n, max_lits, rng));
  return h;
}

std::vector<std::uint8_t> bits_of(std::uint64_t r, int n) {
  std::vector<std::uint8_t> b(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) b[static_cast<std::size_t>(i)] = (r >> i) & 1u;
  return b;
}

}  // namespace

TEST_CASE("evaluate matches DNF semantics on pinned cases", "[core]") {
  const hypothesis h1 = hyp(2, {make_term(2, {{1, pos}, {2, neg}})});  // x1&~x2
  CHECK(evaluate(h1, {1, 0}));
  CHECK_FALSE(evaluate(h1, {1, 1}));
  CHECK_FALSE(evaluate(h1, {0, 0}));

  // x1 + ~x2
  const hypothesis h2 = hyp(2, {make_term(2, {{1, pos}}), make_term(2, {{2, neg}})});
  CHECK_FALSE(evaluate(h2, {0, 1}));
  CHECK(evaluate(h2, {0, 0}));
  CHECK(evaluate(h2, {1, 1}));
  const std::vector<bool> tt = truth_table(h2);
  CHECK(tt == std::vector<bool>{true, true, false, true});

  CHECK(literal_count(hyp(3, {make_term(3, {{1, pos}, {2, neg}}), make_term(3, {{3, pos}})})) == 3);

  CHECK_THROWS_AS(evaluate(h1, {1, 0, 1}), invalid_input);
}

TEST_CASE("empty conjunction is constant true", "[core]") {
  const hypothesis h = hyp(2, {term(2, literal_state::dcare)});
  for (std::uint64_t r = 0; r < 4; ++r) CHECK(evaluate(h, bits_of(r, 2)));
  CHECK(to_string(h) == "1");
}

TEST_CASE("complexity order enumerates (l, k) by l then k, k <= l", "[core]") {
  const std::vector<subspace_spec> expect = {{1, 1}, {2, 1}, {2, 2}, {3, 1}, {3, 2},
                                             {3, 3}, {4, 1}, {4, 2}, {4, 3}};
  CHECK(complexity_order(4, 3) == expect);
  CHECK(complexity_order(1, 1) == std::vector<subspace_spec>{{1, 1}});
  CHECK(complexity_order(3, 1) == std::vector<subspace_spec>{{1, 1}, {2, 1}, {3, 1}});

  // Strictly increasing and duplicate-free under the (l, k) order.
  const auto order = complexity_order(9, 5);
  for (std::size_t i = 1; i < order.size(); ++i) CHECK(order[i - 1] < order[i]);
  for (const auto& s : order) {
    CHECK(s.k <= s.l);
    CHECK(s.k <= 5);
    CHECK(s.l <= 9);
  }
}

TEST_CASE("canonical term sort orders by neg < pos < dcare and rejects duplicates", "[core]") {
  const term x1 = make_term(2, {{1, pos}});
  const term x2 = make_term(2, {{2, pos}});
  hypothesis h = hyp(2, {x2, x1});
  CHECK(canonical_term_sort(h).terms == std::vector<term>{x1, x2});

  const term nx1 = make_term(1, {{1, neg}});
  const term px1 = make_term(1, {{1, pos}});
  hypothesis ordered = hyp(1, {nx1, px1});
  CHECK(canonical_term_sort(ordered).terms == std::vector<term>{nx1, px1});

  CHECK_THROWS_AS(canonical_term_sort(hyp(2, {x1, x1})), invalid_input);
}

TEST_CASE("canonical term sort is idempotent and preserves semantics", "[core]") {
  xoshiro256ss rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(4));
    hypothesis h = random_hypothesis(n, 3, n, rng);
    hypothesis sorted;
    try {
      sorted = canonical_term_sort(h);
    } catch (const invalid_input&) {
      continue;  // duplicate terms are a legitimate reject
    }
    CHECK(canonical_term_sort(sorted).terms == sorted.terms);
    CHECK(truth_table(h) == truth_table(sorted));
    for (std::size_t i = 1; i < sorted.terms.size(); ++i)
      CHECK(term_less(sorted.terms[i - 1], sorted.terms[i]));
  }
}

TEST_CASE("hypothesis strings round-trip through the parser", "[core]") {
  CHECK(to_string(hyp(3, {make_term(3, {{1, pos}, {2, neg}}), make_term(3, {{3, pos}})})) ==
        "x1&~x2 + x3");

  const hypothesis p = parse_hypothesis("x1&~x2 + x3", 3);
  CHECK(p.terms.size() == 2);
  CHECK(p.terms[0] == make_term(3, {{1, pos}, {2, neg}}));
  CHECK(p.terms[1] == make_term(3, {{3, pos}}));

  // CLI-style separators and juxtaposition parse to the same hypothesis.
  CHECK(parse_hypothesis("x1 & ~x2 | x3", 3).terms == p.terms);
  CHECK(parse_hypothesis("x1~x2+x3", 3).terms == p.terms);

  // Empty conjunction round-trips via "1".
  const hypothesis one = parse_hypothesis("x1 + 1", 2);
  CHECK(one.terms[1] == term(2, literal_state::dcare));
  CHECK(to_string(one) == "x1 + 1");

  xoshiro256ss rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(6));
    const hypothesis h = random_hypothesis(n, 3, n, rng);
    const hypothesis back = parse_hypothesis(to_string(h), n);
    CHECK(back.terms == h.terms);
  }
}

TEST_CASE("parser rejects malformed hypothesis strings", "[core]") {
  CHECK_THROWS_AS(parse_hypothesis("", 2), parse_error);
  CHECK_THROWS_AS(parse_hypothesis("x0", 2), parse_error);
  CHECK_THROWS_AS(parse_hypothesis("x3", 2), parse_error);
  CHECK_THROWS_AS(parse_hypothesis("x1 + ", 2), parse_error);
  CHECK_THROWS_AS(parse_hypothesis("x1 & & x2", 2), parse_error);
  CHECK_THROWS_AS(parse_hypothesis("x1 & x1", 2), parse_error);
  CHECK_THROWS_AS(parse_hypothesis("x1 & ~x1", 2), parse_error);
  CHECK_THROWS_AS(parse_hypothesis("y1", 2), parse_error);
}

TEST_CASE("adding a term never shrinks the satisfied set", "[core]") {
  xoshiro256ss rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(5));
    hypothesis h = random_hypothesis(n, 2, n, rng);
    hypothesis wider = h;
    wider.terms.push_back(random_term(n, n, rng));
    for (std::uint64_t r = 0; r < (std::uint64_t{1} << n); ++r) {
      const auto b = bits_of(r, n);
      if (evaluate(h, b)) CHECK(evaluate(wider, b));
    }
  }
}

TEST_CASE("dataset validation and conflict detection", "[core]") {
  dataset d;
  d.n = 2;
  d.samples = {{{1, 1}, label::positive}, {{0, 0}, label::negative}};
  validate_dataset(d);
  CHECK(d.m_pos() == 1);
  CHECK(d.m_neg() == 1);
  CHECK_FALSE(find_conflict(d).has_value());

  d.samples.push_back({{1, 1}, label::negative});
  const auto c = find_conflict(d);
  REQUIRE(c.has_value());
  CHECK(*c == std::vector<std::uint8_t>{1, 1});

  dataset bad;
  bad.n = 2;
  bad.samples = {{{1}, label::positive}};
  CHECK_THROWS_AS(validate_dataset(bad), invalid_input);
}

TEST_CASE("learner config validation and derived enumeration cap", "[core]") {
  learner_config c;
  c.l_max = 4;
  c.k_max = 2;
  validate_config(c);
  CHECK(c.effective_enum_cap() == 1000);  // max(1000, 10*10)
  c.bound_b = 200;
  CHECK(c.effective_enum_cap() == 2000);
  c.enum_cap = 50;
  CHECK(c.effective_enum_cap() == 50);

  learner_config bad = c;
  bad.k_max = 5;
  CHECK_THROWS_AS(validate_config(bad), invalid_input);
  bad = c;
  bad.bound_b = 0;
  CHECK_THROWS_AS(validate_config(bad), invalid_input);
}
