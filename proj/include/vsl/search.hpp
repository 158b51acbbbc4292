#pragma once
// The learning flow: walk hypothesis sub-spaces in complexity order, count
// each version space with the diagram engine, the CNF engine, or a race of
// the two, and stop at the first sub-space whose cardinality lands in (0, B].

#include <atomic>
#include <chrono>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "vsl/bdd_learner.hpp"
#include "vsl/core.hpp"
#include "vsl/sat_learner.hpp"

namespace vsl::search {

// How one sub-space's count came out, as the flow records it.
enum class count_kind : std::uint8_t { exact, greater_than_bound, failed };

struct subspace_result {
  subspace_spec spec{};
  count_kind kind = count_kind::exact;
  big_uint cardinality = 0;     // exact only
  long threshold = 0;           // greater_than_bound: the bound or cap passed
  std::vector<hypothesis> members;  // nonempty iff exact with cardinality >= 1
  engine_kind winner = engine_kind::bdd;
  bool engine_ran = true;       // false for vacuous sub-spaces (l > n*k)
  std::uint64_t elapsed_ms = 0;
  std::string failure;          // failed only
};

enum class flow_result : std::uint8_t { solved, no_fit, overfit, conflict, failed };

inline const char* to_string(flow_result r) {
  switch (r) {
    case flow_result::solved: return "solved";
    case flow_result::no_fit: return "no_fit";
    case flow_result::overfit: return "overfit";
    case flow_result::conflict: return "conflict";
    case flow_result::failed: return "failed";
  }
  return "?";
}

struct learn_report {
  flow_result result = flow_result::no_fit;
  std::vector<subspace_result> visited;

  // solved
  std::optional<subspace_spec> solved_spec;
  big_uint cardinality = 0;
  std::vector<hypothesis> members;

  // overfit: first fitting sub-space that broke the bound
  std::optional<subspace_spec> overfit_spec;

  // conflict: the vector labeled both ways
  std::vector<std::uint8_t> conflict_vector;

  // failed: what stopped the engines (also on the failing visited entry)
  std::string failure;

  std::uint64_t elapsed_ms = 0;
};

namespace detail {

struct engine_outcome {
  count_kind kind = count_kind::exact;
  big_uint cardinality = 0;
  long threshold = 0;
  std::vector<hypothesis> members;
};

inline engine_outcome run_bdd(const dataset& d, subspace_spec spec, const learner_config& cfg,
                              const std::atomic<bool>* cancel) {
  const bdd_learn::encoding_layout lay{d.n, spec.k};
  bdd::manager m(lay.variable_count(), cfg.max_bdd_nodes);
  m.set_cancel_flag(cancel);
  const bdd_learn::build_result built = bdd_learn::build_version_space(m, lay, d, spec, {});
  const bdd_learn::semantic_count sem = bdd_learn::semantic_cardinality(
      m, built.diagram, lay, cfg.effective_enum_cap(), static_cast<std::size_t>(cfg.bound_b));

  engine_outcome out;
  if (sem.outcome == bdd_learn::semantic_count::kind::greater_than_cap) {
    out.kind = count_kind::greater_than_bound;
    out.threshold = sem.cap;
  } else {
    out.cardinality = sem.semantic_cardinality;
    out.members = sem.members;
  }
  return out;
}

inline engine_outcome run_sat(const dataset& d, subspace_spec spec, const learner_config& cfg,
                              const std::atomic<bool>* cancel) {
  sat_learn::engine_options opt;
  opt.enum_cap = cfg.effective_enum_cap();
  opt.bound_b = cfg.bound_b;
  opt.limits.max_conflicts =
      cfg.max_conflicts > 0 ? static_cast<std::uint64_t>(cfg.max_conflicts) : 0;
  opt.limits.cancel = cancel;
  opt.external_cmd = cfg.external_solver_cmd;
  const sat_learn::engine_result r = sat_learn::run_subspace(d, spec, opt);

  engine_outcome out;
  switch (r.outcome) {
    case sat_learn::engine_result::kind::exact:
      out.cardinality = r.semantic_cardinality;
      out.members = r.members;
      break;
    case sat_learn::engine_result::kind::above_bound:
    case sat_learn::engine_result::kind::greater_than_cap:
      out.kind = count_kind::greater_than_bound;
      out.threshold = r.threshold;
      break;
  }
  return out;
}

inline engine_outcome run_engine(engine_kind which, const dataset& d, subspace_spec spec,
                                 const learner_config& cfg, const std::atomic<bool>* cancel) {
  return which == engine_kind::bdd ? run_bdd(d, spec, cfg, cancel)
                                   : run_sat(d, spec, cfg, cancel);
}

}  // namespace detail

// Counts one sub-space with the configured engine(s). Race mode runs one
// worker per engine against a shared stop flag: the first finisher wins and
// the loser is cancelled, which counts as losing, not failing. A sub-space
// fails only when every engine that ran for it failed.
inline subspace_result run_subspace(const dataset& d, subspace_spec spec,
                                    const learner_config& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  subspace_result sr;
  sr.spec = spec;

  auto finish = [&](detail::engine_outcome&& out, engine_kind winner) {
    sr.kind = out.kind;
    sr.cardinality = std::move(out.cardinality);
    sr.threshold = out.threshold;
    sr.winner = winner;
    // Members are reported only for exact nonzero counts; an engine that
    // stopped early (over bound or cap) may have partial representatives,
    // which would misread as the version space.
    if (sr.kind == count_kind::exact)
      sr.members = std::move(out.members);
  };

  if (cfg.engine != engine_kind::race) {
    try {
      finish(detail::run_engine(cfg.engine, d, spec, cfg, nullptr), cfg.engine);
    } catch (const error& e) {
      sr.kind = count_kind::failed;
      sr.failure = e.what();
    }
  } else {
    std::atomic<bool> stop{false};
    std::mutex mu;
    std::optional<detail::engine_outcome> first;
    engine_kind winner = engine_kind::bdd;
    std::string failures[2];

    auto worker = [&](engine_kind which, int slot) {
      try {
        detail::engine_outcome out = detail::run_engine(which, d, spec, cfg, &stop);
        const std::lock_guard<std::mutex> lk(mu);
        if (!first) {
          first = std::move(out);
          winner = which;
          stop.store(true, std::memory_order_relaxed);
        }
      } catch (const cancelled&) {
        // lost the race after the winner signalled; not a failure
      } catch (const std::exception& e) {
        const std::lock_guard<std::mutex> lk(mu);
        failures[slot] = e.what();
      }
    };

    std::thread bdd_worker(worker, engine_kind::bdd, 0);
    std::thread sat_worker(worker, engine_kind::sat, 1);
    bdd_worker.join();
    sat_worker.join();

    if (first) {
      finish(std::move(*first), winner);
    } else {
      sr.kind = count_kind::failed;
      sr.failure = "bdd: " + (failures[0].empty() ? std::string("cancelled") : failures[0]) +
                   "; sat: " + (failures[1].empty() ? std::string("cancelled") : failures[1]);
    }
  }

  sr.elapsed_ms = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
          .count());
  return sr;
}

// The full flow. Conflicting data short-circuits to Conflict; otherwise the
// complexity order is walked until a sub-space fits (0 < |VS| <= B), the
// bound is violated under the fail policy, a sub-space fails, or the order
// is exhausted (NoFit). An engine failure aborts with the partial report.
inline learn_report learn(const dataset& d, const learner_config& cfg) {
  validate_config(cfg);
  validate_dataset(d);
  if (d.n < 1) throw invalid_input("learn: dataset needs at least one feature");

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                              t0)
            .count());
  };

  learn_report rep;
  if (auto confl = find_conflict(d)) {
    rep.result = flow_result::conflict;
    rep.conflict_vector = *confl;
    rep.elapsed_ms = elapsed();
    return rep;
  }

  for (const subspace_spec spec : complexity_order(cfg.l_max, cfg.k_max)) {
    if (spec.l > d.n * spec.k) {
      // No k-term DNF over n features can carry l literals: each term holds
      // at most n. Vacuously empty, recorded without running an engine.
      subspace_result sr;
      sr.spec = spec;
      sr.engine_ran = false;
      rep.visited.push_back(std::move(sr));
      continue;
    }

    subspace_result sr = run_subspace(d, spec, cfg);
    const count_kind kind = sr.kind;
    const big_uint cardinality = sr.cardinality;
    rep.visited.push_back(std::move(sr));
    const subspace_result& entry = rep.visited.back();

    if (kind == count_kind::failed) {
      rep.result = flow_result::failed;
      rep.failure = entry.failure;
      rep.elapsed_ms = elapsed();
      return rep;
    }
    if (kind == count_kind::exact && cardinality == 0) continue;

    if (kind == count_kind::exact && cardinality <= cfg.bound_b) {
      rep.result = flow_result::solved;
      rep.solved_spec = spec;
      rep.cardinality = cardinality;
      rep.members = entry.members;
      rep.elapsed_ms = elapsed();
      return rep;
    }

    // Version space too large to fit.
    if (cfg.on_overfit == overfit_policy::fail) {
      rep.result = flow_result::overfit;
      rep.overfit_spec = spec;
      rep.elapsed_ms = elapsed();
      return rep;
    }
    // continue policy: the record stays in `visited`, the walk goes on.
  }

  rep.result = flow_result::no_fit;
  rep.elapsed_ms = elapsed();
  return rep;
}

}  // namespace vsl::search
