#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "vsl/oracle.hpp"
#include "vsl/rng.hpp"
#include "vsl/sat_learner.hpp"

using namespace vsl;
using namespace vsl::sat_learn;

namespace {

std::uint64_t binom(int n, int r) {
  std::uint64_t v = 1;
  for (int i = 0; i < r; ++i) v = v * static_cast<std::uint64_t>(n - i) / (i + 1);
  return v;
}

// Enumerates every X-projected model of the formula (blocking on X only).
std::vector<hypothesis> all_x_models(const cnf_formula& f, const var_map& vm,
                                     std::size_t guard = 100000) {
  sat::cdcl_solver s(f.var_count);
  for (const auto& c : f.clauses) s.add_clause(c);
  std::vector<hypothesis> out;
  while (s.solve()) {
    REQUIRE(out.size() < guard);
    out.push_back(decode_model(s, vm));
    s.add_clause(blocking_clause(s, vm));
  }
  return out;
}

std::set<std::string> to_strings(const std::vector<hypothesis>& hs) {
  std::set<std::string> out;
  for (const auto& h : hs) out.insert(to_string(h));
  return out;
}

dataset random_dataset(int n, int max_samples, xoshiro256ss& rng) {
  dataset d;
  d.n = n;
  const int m = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_samples) + 1));
  for (int s = 0; s < m; ++s) {
    sample smp;
    smp.lab = rng.coin() ? label::positive : label::negative;
    for (int i = 0; i < n; ++i) smp.bits.push_back(rng.coin() ? 1 : 0);
    d.samples.push_back(std::move(smp));
  }
  return d;
}

}  // namespace

TEST_CASE("one-hot block: clause counts and projected model counts", "[satlearner]") {
  struct row {
    int n, k;
    std::size_t clauses, models;
  };
  for (const row r : {row{1, 1, 4, 3}, row{2, 1, 8, 9}, row{1, 2, 8, 9}}) {
    cnf_formula f;
    const var_map vm(r.n, r.k, r.n * r.k, 0);  // l unused by one-hot
    f.var_count = vm.base_vars();
    encode_onehot(f, vm);
    CHECK(f.clause_count() == r.clauses);
    CHECK(all_x_models(f, vm).size() == r.models);
  }
}

TEST_CASE("exact-l counter matches the closed form C(nk,l)*2^l", "[satlearner]") {
  for (const auto& [n, k] : {std::pair{1, 1}, {2, 1}, {3, 1}, {1, 2}, {2, 2}, {4, 1}, {3, 2}}) {
    const int m = n * k;
    for (int l = k; l <= m; ++l) {
      cnf_formula f;
      const var_map vm(n, k, l, 0);
      f.var_count = vm.base_vars();
      encode_onehot(f, vm);
      encode_exact_l(f, vm);
      const auto models = all_x_models(f, vm);
      CHECK(models.size() == binom(m, l) * (1ull << l));
      for (const hypothesis& h : models) CHECK(literal_count(h) == l);
    }
  }
}

TEST_CASE("positive-sample clauses: count and killing indicators", "[satlearner]") {
  {
    cnf_formula f;
    const var_map vm(100, 3, 3, 1);
    f.var_count = vm.base_vars();
    encode_positive_sample(f, vm, std::vector<std::uint8_t>(100, 1), 0);
    CHECK(f.clause_count() == 304);  // (n+1)k + 1
  }
  {
    cnf_formula f;
    const var_map vm(3, 1, 1, 1);
    f.var_count = vm.base_vars();
    encode_positive_sample(f, vm, {1, 0, 1}, 0);
    // s=101: features 1 and 3 must not appear negated, feature 2 not positive.
    const std::vector<lit> expected_killers{vm.X(1, 1, 1), vm.X(1, 2, 2), vm.X(1, 3, 1)};
    for (lit killer : expected_killers) {
      bool found = false;
      for (const auto& c : f.clauses)
        if (c.size() == 2 && c[0] == -killer && c[1] == -vm.A(0, 1)) found = true;
      CHECK(found);
    }
    // the no-killer-implies-true clause lists exactly the killers plus A
    bool wide_found = false;
    for (const auto& c : f.clauses)
      if (c.size() == 4) {
        std::set<lit> cs(c.begin(), c.end());
        wide_found = cs == std::set<lit>{vm.A(0, 1), vm.X(1, 1, 1), vm.X(1, 2, 2), vm.X(1, 3, 1)};
      }
    CHECK(wide_found);
  }
  {
    // n=1, k=1, s=1 with one-hot only: X models are {pos, dcare}
    cnf_formula f;
    const var_map vm(1, 1, 1, 1);
    f.var_count = vm.base_vars();
    encode_onehot(f, vm);
    encode_positive_sample(f, vm, {1}, 0);
    CHECK(to_strings(all_x_models(f, vm)) == std::set<std::string>{"x1", "1"});
  }
}

TEST_CASE("negative-sample clauses: one killing clause per term", "[satlearner]") {
  {
    cnf_formula f;
    const var_map vm(3, 1, 1, 0);
    f.var_count = vm.base_vars();
    encode_negative_sample(f, vm, {1, 0, 1});
    REQUIRE(f.clause_count() == 1);
    CHECK(f.clauses[0] == std::vector<lit>{vm.X(1, 1, 1), vm.X(1, 2, 2), vm.X(1, 3, 1)});
  }
  {
    cnf_formula f;
    const var_map vm(1, 1, 1, 0);
    f.var_count = vm.base_vars();
    encode_onehot(f, vm);
    encode_negative_sample(f, vm, {1});
    CHECK(to_strings(all_x_models(f, vm)) == std::set<std::string>{"~x1"});
  }
  {
    cnf_formula f;
    const var_map vm(2, 2, 2, 0);
    f.var_count = vm.base_vars();
    encode_negative_sample(f, vm, {0, 1});
    CHECK(f.clause_count() == 2);
  }
}

TEST_CASE("lexicographic CNF matches the diagram relation", "[satlearner]") {
  {
    cnf_formula f;
    const var_map vm(1, 2, 2, 0);
    f.var_count = vm.base_vars();
    encode_onehot(f, vm);
    encode_lex_cnf(f, vm);
    CHECK(all_x_models(f, vm).size() == 3);  // of the 9 codes
  }
  for (const int n : {2, 3}) {
    cnf_formula f;
    const var_map vm(n, 2, 2, 0);
    f.var_count = vm.base_vars();
    encode_onehot(f, vm);
    encode_lex_cnf(f, vm);
    const auto sat_models = to_strings(all_x_models(f, vm));

    bdd::manager m(bdd_learn::encoding_layout{n, 2}.variable_count());
    const bdd_learn::encoding_layout lay{n, 2};
    const bdd::handle dd =
        m.apply_and(bdd_learn::encode_base_space(m, lay), bdd_learn::encode_lex_pair(m, lay, 0));
    const auto en = m.enumerate_minterms(dd, lay.variable_count(), 100000);
    REQUIRE_FALSE(en.more_remaining);
    std::set<std::string> bdd_models;
    for (const auto& a : en.assignments)
      bdd_models.insert(to_string(bdd_learn::decode_minterm(a, lay)));
    CHECK(sat_models == bdd_models);
  }
}

TEST_CASE("encoding size for one full configuration, counted by hand", "[satlearner]") {
  // n=3, k=2, l=3, one positive and one negative sample.
  dataset d{3, {{{1, 0, 1}, label::positive}, {{0, 0, 0}, label::negative}}};
  const auto inst = build_cnf(d, {3, 2});
  CHECK(inst.vm.x_vars() == 18);
  CHECK(inst.vm.s_vars() == 15);
  CHECK(inst.vm.a_vars() == 2);
  // lex auxiliaries: E_1..E_2 and C_1..C_3 for the single adjacent pair
  CHECK(inst.formula.var_count == 35 + 5);
  // one-hot 24, exact-l 55, lex 19, positive 9, negative 2
  CHECK(inst.formula.clause_count() == 24 + 55 + 19 + 9 + 2);
}

TEST_CASE("model enumeration on pinned version spaces", "[satlearner]") {
  {
    // conflicting dataset: unsatisfiable, empty, exhausted
    dataset d{2, {{{1, 0}, label::positive}, {{1, 0}, label::negative}}};
    const auto r = enumerate_models(build_cnf(d, {1, 1}), 10);
    CHECK(r.models.empty());
    CHECK(r.exhausted);
  }
  {
    // version space of size 1: stop probing after the only model
    dataset d{2,
              {{{1, 1}, label::positive},
               {{1, 0}, label::negative},
               {{0, 1}, label::negative}}};
    const auto r = enumerate_models(build_cnf(d, {2, 1}), 2);
    REQUIRE(r.models.size() == 1);
    CHECK(to_string(r.models[0]) == "x1&x2");
    CHECK(r.exhausted);
  }
  {
    dataset d{2, {{{1, 1}, label::positive}, {{0, 0}, label::negative}}};
    const auto r = enumerate_models(build_cnf(d, {1, 1}), 10);
    CHECK(to_strings(r.models) == std::set<std::string>{"x1", "x2"});
    CHECK(r.exhausted);
  }
}

TEST_CASE("cross-engine equality on random small instances", "[satlearner]") {
  xoshiro256ss rng(777);
  int nonempty = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(3));  // 2..4
    const int k = 1 + static_cast<int>(rng.below(2));  // 1..2
    const int max_l = std::min(4, n * k);
    if (k > max_l) continue;
    const int l = k + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_l - k) + 1));
    const dataset d = random_dataset(n, 6, rng);
    if (find_conflict(d)) continue;
    const subspace_spec spec{l, k};

    // SAT route: full eager enumeration of X models.
    const auto sat_models = enumerate_models(build_cnf(d, spec), 100000);
    REQUIRE(sat_models.exhausted);

    // Diagram route: enumerate the version-space diagram.
    bdd::manager m(bdd_learn::encoding_layout{n, k}.variable_count());
    const bdd_learn::encoding_layout lay{n, k};
    const auto res = bdd_learn::build_version_space(m, lay, d, spec);
    const auto en = m.enumerate_minterms(res.diagram, lay.variable_count(), 200000);
    REQUIRE_FALSE(en.more_remaining);
    std::set<std::string> bdd_models;
    for (const auto& a : en.assignments)
      bdd_models.insert(to_string(bdd_learn::decode_minterm(a, lay)));

    CHECK(to_strings(sat_models.models) == bdd_models);
    if (!bdd_models.empty()) ++nonempty;

    // Engine outcome vs oracle classes.
    engine_options opt;
    opt.enum_cap = 100000;
    opt.bound_b = 100000;
    const auto eng = run_subspace(d, spec, opt);
    const auto vs = oracle::compute_version_space(d, spec);
    REQUIRE(eng.outcome == engine_result::kind::exact);
    CHECK(eng.semantic_cardinality == vs.class_count);
    CHECK(eng.syntactic_seen == vs.syntactic_members.size());
  }
  CHECK(nonempty >= 10);
}

TEST_CASE("engine outcomes: exact, above bound, above cap", "[satlearner]") {
  dataset d{2, {{{1, 1}, label::positive}, {{0, 0}, label::negative}}};
  {
    engine_options opt;
    const auto r = run_subspace(d, {1, 1}, opt);
    REQUIRE(r.outcome == engine_result::kind::exact);
    CHECK(r.semantic_cardinality == 2);
    REQUIRE(r.members.size() == 2);
    CHECK(to_string(r.members[0]) == "x1");
    CHECK(to_string(r.members[1]) == "x2");
  }
  {
    engine_options opt;
    opt.bound_b = 1;
    const auto r = run_subspace(dataset{3, {}}, {1, 1}, opt);
    CHECK(r.outcome == engine_result::kind::above_bound);
    CHECK(r.threshold == 1);
  }
  {
    engine_options opt;
    opt.bound_b = 1000;
    opt.enum_cap = 2;
    const auto r = run_subspace(dataset{3, {}}, {1, 1}, opt);
    CHECK(r.outcome == engine_result::kind::greater_than_cap);
    CHECK(r.threshold == 2);
  }
}

TEST_CASE("lazy negative loading reproduces the eager result", "[satlearner]") {
  xoshiro256ss rng(888);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(2));
    const int k = 1 + static_cast<int>(rng.below(2));
    const int l = k;
    dataset d = random_dataset(n, 8, rng);
    if (find_conflict(d)) continue;

    engine_options eager;
    eager.enum_cap = 100000;
    eager.bound_b = 100000;
    eager.lazy_negatives = false;
    engine_options lazy = eager;
    lazy.lazy_negatives = true;
    lazy.negative_batch = 2;  // stress the counterexample path

    const auto a = run_subspace(d, {l, k}, eager);
    const auto b = run_subspace(d, {l, k}, lazy);
    CHECK(a.outcome == b.outcome);
    CHECK(a.semantic_cardinality == b.semantic_cardinality);
    CHECK(a.syntactic_seen == b.syntactic_seen);
    REQUIRE(a.members.size() == b.members.size());
    for (std::size_t i = 0; i < a.members.size(); ++i)
      CHECK(to_string(a.members[i]) == to_string(b.members[i]));
  }
}

TEST_CASE("members from the engine are consistent and of the right complexity", "[satlearner]") {
  xoshiro256ss rng(999);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3;
    const int k = 1 + static_cast<int>(rng.below(2));
    const int l = k + static_cast<int>(rng.below(2));
    const dataset d = random_dataset(n, 5, rng);
    if (find_conflict(d)) continue;
    engine_options opt;
    opt.enum_cap = 100000;
    opt.bound_b = 100000;
    opt.max_members = 1u << 14;
    const auto r = run_subspace(d, {l, k}, opt);
    REQUIRE(r.outcome == engine_result::kind::exact);
    for (const hypothesis& h : r.members) {
      CHECK(literal_count(h) == l);
      for (const sample& s : d.samples)
        CHECK(evaluate(h, s.bits) == (s.lab == label::positive));
    }
  }
}
