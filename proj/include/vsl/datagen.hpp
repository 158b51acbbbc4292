#pragma once
// Planted-concept dataset generation: rejection-sample uniform vectors, label
// them with a target hypothesis, and optionally plant one positive witness
// per term that no other term explains. Deterministic under the seed.

#include <cstdint>
#include <string>
#include <vector>

#include "vsl/bdd_learner.hpp"
#include "vsl/core.hpp"
#include "vsl/rng.hpp"

namespace vsl::datagen {

struct gen_spec {
  int n = 0;
  hypothesis target;
  int m_p = 0;
  int m_n = 0;
  std::uint64_t seed = 0;
  bool per_term_witness = false;
};

struct gen_result {
  dataset data;                        // positives first, then negatives
  std::vector<std::string> warnings;   // witnesses that could not be built
};

// Bounds the rejection loops; the imbalanced regimes of interest accept a
// positive with probability >= 2^-9, so this is orders of magnitude of slack.
inline constexpr std::uint64_t max_draws_per_class = 10'000'000;

namespace detail {

inline std::vector<std::uint8_t> random_vector(xoshiro256ss& rng, int n) {
  std::vector<std::uint8_t> v(static_cast<std::size_t>(n));
  for (auto& b : v) b = rng.coin() ? 1 : 0;
  return v;
}

// True when exactly one term of h — the one at `only` — accepts v.
inline bool explained_only_by(const hypothesis& h, std::size_t only,
                              const std::vector<std::uint8_t>& v) {
  for (std::size_t j = 0; j < h.terms.size(); ++j) {
    bool sat = true;
    for (std::size_t i = 0; i < h.terms[j].size(); ++i) {
      const literal_state st = h.terms[j][i];
      if (st == literal_state::dcare) continue;
      if ((st == literal_state::pos) != (v[i] != 0)) {
        sat = false;
        break;
      }
    }
    if (sat != (j == only)) return false;
  }
  return true;
}

// Builds a vector satisfying term `only` and violating every other term, by
// fixing term-`only` literals, then flipping one free feature against each
// remaining term that still fires. Random bits elsewhere keep witnesses from
// being artificially structured.
inline bool make_witness(xoshiro256ss& rng, const hypothesis& h, std::size_t only,
                         std::vector<std::uint8_t>& out) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<std::uint8_t> v = random_vector(rng, h.n);
    for (std::size_t i = 0; i < h.terms[only].size(); ++i) {
      const literal_state st = h.terms[only][i];
      if (st != literal_state::dcare) v[i] = st == literal_state::pos ? 1 : 0;
    }
    for (std::size_t j = 0; j < h.terms.size(); ++j) {
      if (j == only) continue;
      bool fires = true;
      for (std::size_t i = 0; i < h.terms[j].size(); ++i) {
        const literal_state st = h.terms[j][i];
        if (st == literal_state::dcare) continue;
        if ((st == literal_state::pos) != (v[i] != 0)) {
          fires = false;
          break;
        }
      }
      if (!fires) continue;
      // Flip one feature term j constrains but term `only` leaves free.
      for (std::size_t i = 0; i < h.terms[j].size(); ++i) {
        if (h.terms[j][i] == literal_state::dcare) continue;
        if (h.terms[only][i] != literal_state::dcare) continue;
        v[i] = static_cast<std::uint8_t>(1 - v[i]);
        break;
      }
    }
    if (explained_only_by(h, only, v)) {
      out = std::move(v);
      return true;
    }
  }
  return false;
}

}  // namespace detail

// The target's Boolean function decides feasibility: a tautology has no
// negatives, an unsatisfiable target no positives. Checked on the function
// diagram, so it is exact for any n.
inline gen_result generate(const gen_spec& g) {
  if (g.n < 1) throw invalid_input("datagen: n must be >= 1");
  if (g.target.n != g.n) throw invalid_input("datagen: target width differs from n");
  if (g.m_p < 0 || g.m_n < 0) throw invalid_input("datagen: sample quotas must be >= 0");
  validate_hypothesis(g.target);

  bdd::manager m(static_cast<std::uint32_t>(g.n));
  const bdd::handle fn = bdd_learn::function_diagram(m, g.target);
  if (g.m_p > 0 && fn == m.zero())
    throw invalid_input("datagen: target is unsatisfiable, no positive sample exists");
  if (g.m_n > 0 && fn == m.one())
    throw invalid_input("datagen: target is a tautology, no negative sample exists");

  xoshiro256ss rng(g.seed);
  gen_result out;
  out.data.n = g.n;

  std::vector<std::vector<std::uint8_t>> positives;
  if (g.per_term_witness) {
    for (std::size_t j = 0; j < g.target.terms.size(); ++j) {
      if (static_cast<int>(positives.size()) >= g.m_p) break;
      std::vector<std::uint8_t> w;
      if (detail::make_witness(rng, g.target, j, w))
        positives.push_back(std::move(w));
      else
        out.warnings.push_back("no witness possible for term " + std::to_string(j + 1) +
                               ": every satisfying vector also fires another term");
    }
  }

  std::uint64_t draws = 0;
  while (static_cast<int>(positives.size()) < g.m_p) {
    if (++draws > max_draws_per_class)
      throw invalid_input("datagen: positive quota unreachable within the draw budget");
    std::vector<std::uint8_t> v = detail::random_vector(rng, g.n);
    if (evaluate(g.target, v)) positives.push_back(std::move(v));
  }
  for (auto& v : positives) {
    sample s;
    s.lab = label::positive;
    s.bits = std::move(v);
    out.data.samples.push_back(std::move(s));
  }

  draws = 0;
  int negatives = 0;
  while (negatives < g.m_n) {
    if (++draws > max_draws_per_class)
      throw invalid_input("datagen: negative quota unreachable within the draw budget");
    std::vector<std::uint8_t> v = detail::random_vector(rng, g.n);
    if (evaluate(g.target, v)) continue;
    sample s;
    s.lab = label::negative;
    s.bits = std::move(v);
    out.data.samples.push_back(std::move(s));
    ++negatives;
  }
  return out;
}

}  // namespace vsl::datagen
