#pragma once

// Complete SAT backends for the CNF route.
//
// cdcl_solver is an embedded conflict-driven solver: two-watched-literal
// propagation, first-UIP learning with recursive minimization, adaptive
// restarts paced by learnt-clause LBD averages, phase saving, and scheduled
// learnt-clause reduction. Every tie is broken by variable index, so runs
// are bit-reproducible. Clauses may be added between solve() calls (model
// blocking, lazy constraints).
//
// solve_external shells out to a DIMACS solver using SAT-competition
// output conventions, for users who have one installed.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vsl/cnf.hpp"
#include "vsl/core.hpp"

namespace vsl::sat {

struct solver_limits {
  std::uint64_t max_conflicts = 0;            // 0 = unlimited
  const std::atomic<bool>* cancel = nullptr;  // optional cooperative stop flag
};

enum class decision_mode {
  vsids,       // activity order, index tie-break
  fixed_order  // lowest-index unassigned variable, saved phase (false first)
};

class cdcl_solver {
 public:
  explicit cdcl_solver(int var_count, decision_mode mode = decision_mode::vsids)
      : mode_(mode) {
    if (var_count < 0) throw invalid_input("solver: negative variable count");
    grow_to(var_count);
  }

  int var_count() const { return static_cast<int>(assigns_.size()); }
  bool okay() const { return ok_; }
  std::uint64_t conflicts() const { return conflicts_; }

  void ensure_vars(int var_count) {
    if (var_count > this->var_count()) grow_to(var_count);
  }

  // Suggested first branching value for a variable (DIMACS index).
  void set_initial_phase(int var, bool phase) {
    if (var < 1 || var > var_count()) throw invalid_input("solver: phase variable out of range");
    polarity_[static_cast<std::size_t>(var - 1)] = phase ? 1 : 0;
  }

  // Branch only on the given variables (DIMACS indices); everything else is
  // left to propagation, with a completeness fallback in pick_branch_var.
  // Encodings whose auxiliaries are functions of a core (counters, covers)
  // search dramatically faster this way. Variables added later are decidable.
  void restrict_decisions(const std::vector<int>& vars) {
    decidable_.assign(assigns_.size(), 0);
    for (int v : vars) {
      if (v < 1 || v > var_count()) throw invalid_input("solver: decision variable out of range");
      decidable_[static_cast<std::size_t>(v - 1)] = 1;
    }
    heap_.clear();
    std::fill(heap_pos_.begin(), heap_pos_.end(), -1);
    for (std::uint32_t v = 0; v < assigns_.size(); ++v)
      if (assigns_[v] < 0 && decidable_[v] != 0) heap_insert(static_cast<int>(v));
  }

  // Clause literals are DIMACS ints. Safe to call between solve() calls.
  void add_clause(const std::vector<lit>& original) {
    if (!ok_) return;
    cancel_until(0);
    std::vector<std::uint32_t> c;
    c.reserve(original.size());
    for (lit x : original) {
      if (x == 0) throw invalid_input("solver: zero literal");
      const int v = x > 0 ? x : -x;
      if (v > var_count()) throw invalid_input("solver: literal outside variable range");
      c.push_back(make_ilit(v, x < 0));
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
      if ((c[i] ^ 1u) == c[i + 1]) return;  // tautology
    std::vector<std::uint32_t> kept;
    for (std::uint32_t p : c) {
      const int v = value(p);
      if (v == 1) return;  // satisfied at root
      if (v == 0) kept.push_back(p);
    }
    if (kept.empty()) {
      ok_ = false;
      return;
    }
    if (kept.size() == 1) {
      unchecked_enqueue(kept[0], cref_none);
      if (propagate() != cref_none) ok_ = false;
      return;
    }
    attach(alloc_clause(kept, false));
  }

  // true = satisfiable (model readable via value_of), false = unsatisfiable.
  // Throws resource_limit / cancelled; the solver must be discarded after either.
  bool solve(const solver_limits& lim = {}) {
    if (!ok_) return false;
    model_.clear();
    cancel_until(0);
    if (propagate() != cref_none) {
      ok_ = false;
      return false;
    }
    std::uint64_t since_restart = 0;

    for (;;) {
      const std::uint32_t confl = propagate();
      if (confl != cref_none) {
        ++conflicts_;
        ++since_restart;
        if (lim.max_conflicts && conflicts_ > lim.max_conflicts)
          throw resource_limit("solver: conflict budget exhausted");
        if (lim.cancel && (conflicts_ & 255u) == 0 && lim.cancel->load(std::memory_order_relaxed))
          throw cancelled("solver: cancelled");
        if (decision_level() == 0) {
          ok_ = false;
          return false;
        }
        learnt_.clear();
        int bt_level = 0;
        std::uint32_t lbd = 0;
        analyze(confl, learnt_, bt_level, lbd);
        // Restart pacing: exponential moving averages of learnt-clause LBD.
        // A long trail means the search is probably descending toward a
        // model; postpone the next restart rather than throw that away.
        if (conflicts_ > 10000 &&
            static_cast<double>(trail_.size()) > 1.4 * trail_avg_)
          since_restart = 0;
        lbd_fast_ += (static_cast<double>(lbd) - lbd_fast_) / 32.0;
        lbd_slow_ += (static_cast<double>(lbd) - lbd_slow_) / 16384.0;
        trail_avg_ += (static_cast<double>(trail_.size()) - trail_avg_) / 4096.0;
        cancel_until(bt_level);
        if (learnt_.size() == 1) {
          unchecked_enqueue(learnt_[0], cref_none);
        } else {
          const std::uint32_t cr = alloc_clause(learnt_, true);
          arena_[cr + 1] = lbd;
          attach(cr);
          bump_clause(cr);
          unchecked_enqueue(learnt_[0], cr);
        }
        var_inc_ *= (1.0 / 0.95);
        cla_inc_ *= (1.0 / 0.999);
        if (var_inc_ > 1e100) rescale_var_activity();
        if (cla_inc_ > 1e20f) rescale_clause_activity();
      } else {
        // Restart when recent learnt clauses are markedly worse (higher LBD)
        // than the run average — the classic signal that the current branch
        // is unproductive. DB reduction rides the same level-0 boundary
        // because it relocates the arena.
        const bool reduce_due = conflicts_ >= reduce_at_;
        const bool restart_due = since_restart >= 50 && lbd_fast_ > 1.25 * lbd_slow_;
        if (restart_due || reduce_due) {
          cancel_until(0);
          if (lim.cancel && lim.cancel->load(std::memory_order_relaxed))
            throw cancelled("solver: cancelled");
          if (reduce_due) {
            reduce_db();
            reduce_at_ = conflicts_ + 2000 + 300 * static_cast<std::uint64_t>(reduces_);
          }
          since_restart = 0;
          continue;
        }
        const int next = pick_branch_var();
        if (next < 0) {
          model_.assign(assigns_.begin(), assigns_.end());
          cancel_until(0);
          return true;
        }
        trail_lim_.push_back(static_cast<std::uint32_t>(trail_.size()));
        const bool phase = polarity_[static_cast<std::size_t>(next)] != 0;
        unchecked_enqueue(make_ilit(next + 1, !phase), cref_none);
      }
    }
  }

  // After a satisfiable solve: the model value of a DIMACS variable.
  bool value_of(int var) const {
    if (model_.empty()) throw invalid_input("solver: no model available");
    if (var < 1 || var > static_cast<int>(model_.size()))
      throw invalid_input("solver: model variable out of range");
    return model_[static_cast<std::size_t>(var - 1)] == 1;
  }

 private:
  // ---- literals: internal ilit = (var0 << 1) | negated ----
  static std::uint32_t make_ilit(int dimacs_var, bool neg) {
    return (static_cast<std::uint32_t>(dimacs_var - 1) << 1) | (neg ? 1u : 0u);
  }
  static std::uint32_t ilit_var(std::uint32_t p) { return p >> 1; }

  static constexpr std::uint32_t cref_none = 0xffffffffu;

  // ---- clause arena: [size<<1|learnt][lbd][act(float bits)][lits...] ----
  std::uint32_t alloc_clause(const std::vector<std::uint32_t>& lits, bool learnt) {
    const std::uint32_t cr = static_cast<std::uint32_t>(arena_.size());
    arena_.push_back((static_cast<std::uint32_t>(lits.size()) << 1) | (learnt ? 1u : 0u));
    arena_.push_back(0);
    arena_.push_back(0);
    arena_.insert(arena_.end(), lits.begin(), lits.end());
    (learnt ? learnts_ : clauses_).push_back(cr);
    return cr;
  }
  std::uint32_t clause_size(std::uint32_t cr) const { return arena_[cr] >> 1; }
  bool clause_learnt(std::uint32_t cr) const { return arena_[cr] & 1u; }
  std::uint32_t* clause_lits(std::uint32_t cr) { return arena_.data() + cr + 3; }
  const std::uint32_t* clause_lits(std::uint32_t cr) const { return arena_.data() + cr + 3; }
  float clause_act(std::uint32_t cr) const {
    float f;
    std::uint32_t w = arena_[cr + 2];
    std::memcpy(&f, &w, 4);
    return f;
  }
  void set_clause_act(std::uint32_t cr, float f) { std::memcpy(&arena_[cr + 2], &f, 4); }

  struct watcher {
    std::uint32_t cref;
    std::uint32_t blocker;
  };

  void attach(std::uint32_t cr) {
    const std::uint32_t* ls = clause_lits(cr);
    auto& dst = clause_size(cr) == 2 ? watches_bin_ : watches_;
    dst[ls[0]].push_back({cr, ls[1]});
    dst[ls[1]].push_back({cr, ls[0]});
  }

  // ---- assignment state ----
  int value(std::uint32_t p) const {  // 1 true, -1 false, 0 unassigned
    const std::int8_t a = assigns_[ilit_var(p)];
    if (a < 0) return 0;
    return (static_cast<std::uint32_t>(a) ^ (p & 1u)) ? 1 : -1;
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void unchecked_enqueue(std::uint32_t p, std::uint32_t from) {
    const std::uint32_t v = ilit_var(p);
    assigns_[v] = static_cast<std::int8_t>((p & 1u) ^ 1u);
    reason_[v] = from;
    level_[v] = decision_level();
    trail_.push_back(p);
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    const std::uint32_t bound = trail_lim_[static_cast<std::size_t>(lvl)];
    for (std::size_t i = trail_.size(); i > bound; --i) {
      const std::uint32_t p = trail_[i - 1];
      const std::uint32_t v = ilit_var(p);
      polarity_[v] = static_cast<std::uint8_t>((p & 1u) ^ 1u);  // phase saving
      assigns_[v] = -1;
      reason_[v] = cref_none;
      if (is_decidable(v)) heap_insert(static_cast<int>(v));
    }
    trail_.resize(bound);
    trail_lim_.resize(static_cast<std::size_t>(lvl));
    qhead_ = static_cast<std::uint32_t>(trail_.size());
    if (mode_ == decision_mode::fixed_order) fixed_hint_ = 0;
  }

  // ---- propagation ----
  std::uint32_t propagate() {
    while (qhead_ < trail_.size()) {
      const std::uint32_t p = trail_[qhead_++];      // became true
      const std::uint32_t fl = p ^ 1u;               // now false

      // Binary clauses first: the watcher already holds the only other
      // literal, so no arena access and no watch-list rewriting.
      for (const watcher& w : watches_bin_[fl]) {
        const int v = value(w.blocker);
        if (v == 1) continue;
        if (v == -1) {
          qhead_ = static_cast<std::uint32_t>(trail_.size());
          return w.cref;
        }
        unchecked_enqueue(w.blocker, w.cref);
      }

      std::vector<watcher>& ws = watches_[fl];
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        const watcher w = ws[i++];
        if (value(w.blocker) == 1) {
          ws[j++] = w;
          continue;
        }
        const std::uint32_t cr = w.cref;
        std::uint32_t* ls = clause_lits(cr);
        if (ls[0] == fl) std::swap(ls[0], ls[1]);
        if (value(ls[0]) == 1) {
          ws[j++] = {cr, ls[0]};
          continue;
        }
        const std::uint32_t size = clause_size(cr);
        bool moved = false;
        for (std::uint32_t t = 2; t < size; ++t) {
          if (value(ls[t]) != -1) {
            std::swap(ls[1], ls[t]);
            watches_[ls[1]].push_back({cr, ls[0]});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {cr, ls[0]};
        if (value(ls[0]) == -1) {  // conflict
          while (i < ws.size()) ws[j++] = ws[i++];
          ws.resize(j);
          qhead_ = static_cast<std::uint32_t>(trail_.size());
          return cr;
        }
        unchecked_enqueue(ls[0], cr);
      }
      ws.resize(j);
    }
    return cref_none;
  }

  // ---- conflict analysis: first UIP + basic minimization ----
  void analyze(std::uint32_t confl, std::vector<std::uint32_t>& out, int& bt, std::uint32_t& lbd) {
    out.push_back(0);  // slot for the asserting literal
    int counter = 0;
    std::uint32_t p = cref_none;
    std::size_t index = trail_.size();

    do {
      std::uint32_t* ls = clause_lits(confl);
      const std::uint32_t size = clause_size(confl);
      if (clause_learnt(confl)) {
        bump_clause(confl);
        // Refresh the stored LBD downward while every literal is assigned;
        // clauses that keep proving useful sink below the reduction cut.
        ++lbd_stamp_;
        std::uint32_t cur = 0;
        for (std::uint32_t t = 0; t < size; ++t) {
          const int lv = level_[ilit_var(ls[t])];
          if (lv > 0 && lbd_seen_[static_cast<std::size_t>(lv)] != lbd_stamp_) {
            lbd_seen_[static_cast<std::size_t>(lv)] = lbd_stamp_;
            ++cur;
          }
        }
        if (cur < arena_[confl + 1]) arena_[confl + 1] = cur;
      }
      for (std::uint32_t t = 0; t < size; ++t) {
        const std::uint32_t q = ls[t];
        // Skip the propagated literal itself; binary-watch reasons do not
        // keep it at index 0, so match by value rather than position.
        if (q == p) continue;
        const std::uint32_t v = ilit_var(q);
        if (!seen_[v] && level_[v] > 0) {
          seen_[v] = 1;
          bump_var(static_cast<int>(v));
          if (level_[v] >= decision_level())
            ++counter;
          else
            out.push_back(q);
        }
      }
      while (!seen_[ilit_var(trail_[--index])]) {
      }
      p = trail_[index];
      confl = reason_[ilit_var(p)];
      seen_[ilit_var(p)] = 0;
      --counter;
    } while (counter > 0);
    out[0] = p ^ 1u;

    // Recursive minimization: drop a literal when its implication closure
    // bottoms out entirely inside the clause. seen_ doubles as the "in
    // clause or proven redundant" memo; to_clear_ collects every mark set
    // here so all of them are wiped at the end.
    to_clear_.clear();
    for (const std::uint32_t q : out) to_clear_.push_back(ilit_var(q));
    std::uint32_t abstract_levels = 0;
    for (std::size_t t = 1; t < out.size(); ++t)
      abstract_levels |= 1u << (static_cast<std::uint32_t>(level_[ilit_var(out[t])]) & 31u);
    std::size_t keep = 1;
    for (std::size_t t = 1; t < out.size(); ++t) {
      if (reason_[ilit_var(out[t])] == cref_none || !lit_redundant(out[t], abstract_levels))
        out[keep++] = out[t];
    }
    out.resize(keep);
    for (const std::uint32_t v : to_clear_) seen_[v] = 0;

    // Backjump level: highest level among the non-asserting literals.
    bt = 0;
    if (out.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t t = 2; t < out.size(); ++t)
        if (level_[ilit_var(out[t])] > level_[ilit_var(out[max_i])]) max_i = t;
      std::swap(out[1], out[max_i]);
      bt = level_[ilit_var(out[1])];
    }

    // LBD: distinct decision levels in the learnt clause.
    ++lbd_stamp_;
    lbd = 0;
    for (std::uint32_t q : out) {
      const int lv = level_[ilit_var(q)];
      if (lv > 0 && lbd_seen_[static_cast<std::size_t>(lv)] != lbd_stamp_) {
        lbd_seen_[static_cast<std::size_t>(lv)] = lbd_stamp_;
        ++lbd;
      }
    }
  }

  // True when every path from q's reason terminates in clause literals or
  // level-0 facts. Marks proven-redundant variables in seen_ (memoization);
  // marks set along a failed probe are rolled back.
  bool lit_redundant(std::uint32_t q, std::uint32_t abstract_levels) {
    analyze_stack_.clear();
    analyze_stack_.push_back(q);
    const std::size_t top = to_clear_.size();
    while (!analyze_stack_.empty()) {
      const std::uint32_t p = analyze_stack_.back();
      analyze_stack_.pop_back();
      const std::uint32_t r = reason_[ilit_var(p)];
      const std::uint32_t* ls = clause_lits(r);
      const std::uint32_t size = clause_size(r);
      for (std::uint32_t t = 0; t < size; ++t) {
        const std::uint32_t v = ilit_var(ls[t]);
        if (v == ilit_var(p) || seen_[v] || level_[v] == 0) continue;
        if (reason_[v] == cref_none ||
            ((1u << (static_cast<std::uint32_t>(level_[v]) & 31u)) & abstract_levels) == 0) {
          for (std::size_t u = top; u < to_clear_.size(); ++u) seen_[to_clear_[u]] = 0;
          to_clear_.resize(top);
          return false;
        }
        seen_[v] = 1;
        to_clear_.push_back(v);
        analyze_stack_.push_back(ls[t]);
      }
    }
    return true;
  }

  // ---- activity ----
  void bump_var(int v) {
    activity_[static_cast<std::size_t>(v)] += var_inc_;
    if (heap_pos_[static_cast<std::size_t>(v)] >= 0) heap_up(heap_pos_[static_cast<std::size_t>(v)]);
  }
  void rescale_var_activity() {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  void bump_clause(std::uint32_t cr) { set_clause_act(cr, clause_act(cr) + cla_inc_); }
  void rescale_clause_activity() {
    for (std::uint32_t cr : learnts_) set_clause_act(cr, clause_act(cr) * 1e-20f);
    cla_inc_ *= 1e-20f;
  }

  // ---- decision heap (max activity, min index on ties) ----
  bool heap_less(int a, int b) const {
    const double aa = activity_[static_cast<std::size_t>(a)];
    const double ab = activity_[static_cast<std::size_t>(b)];
    return aa > ab || (aa == ab && a < b);
  }
  void heap_up(int pos) {
    const int v = heap_[static_cast<std::size_t>(pos)];
    while (pos > 0) {
      const int parent = (pos - 1) >> 1;
      if (!heap_less(v, heap_[static_cast<std::size_t>(parent)])) break;
      heap_[static_cast<std::size_t>(pos)] = heap_[static_cast<std::size_t>(parent)];
      heap_pos_[static_cast<std::size_t>(heap_[static_cast<std::size_t>(pos)])] = pos;
      pos = parent;
    }
    heap_[static_cast<std::size_t>(pos)] = v;
    heap_pos_[static_cast<std::size_t>(v)] = pos;
  }
  void heap_down(int pos) {
    const int v = heap_[static_cast<std::size_t>(pos)];
    const int n = static_cast<int>(heap_.size());
    for (;;) {
      int child = 2 * pos + 1;
      if (child >= n) break;
      if (child + 1 < n &&
          heap_less(heap_[static_cast<std::size_t>(child + 1)], heap_[static_cast<std::size_t>(child)]))
        ++child;
      if (!heap_less(heap_[static_cast<std::size_t>(child)], v)) break;
      heap_[static_cast<std::size_t>(pos)] = heap_[static_cast<std::size_t>(child)];
      heap_pos_[static_cast<std::size_t>(heap_[static_cast<std::size_t>(pos)])] = pos;
      pos = child;
    }
    heap_[static_cast<std::size_t>(pos)] = v;
    heap_pos_[static_cast<std::size_t>(v)] = pos;
  }
  void heap_insert(int v) {
    if (heap_pos_[static_cast<std::size_t>(v)] >= 0) return;
    heap_.push_back(v);
    heap_pos_[static_cast<std::size_t>(v)] = static_cast<int>(heap_.size()) - 1;
    heap_up(static_cast<int>(heap_.size()) - 1);
  }
  int heap_pop() {
    const int v = heap_[0];
    heap_pos_[static_cast<std::size_t>(v)] = -1;
    const int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heap_pos_[static_cast<std::size_t>(last)] = 0;
      heap_down(0);
    }
    return v;
  }

  int pick_branch_var() {
    if (mode_ == decision_mode::fixed_order) {
      for (std::uint32_t v = fixed_hint_; v < assigns_.size(); ++v) {
        if (assigns_[v] < 0 && is_decidable(v)) {
          fixed_hint_ = v;
          return static_cast<int>(v);
        }
      }
      return fallback_branch_var();
    }
    while (!heap_.empty()) {
      const int v = heap_pop();
      if (assigns_[static_cast<std::size_t>(v)] < 0) return v;
    }
    return fallback_branch_var();
  }

  // Safety net under restricted decisions: if propagation did not finish the
  // non-decidable variables off, branch on one anyway — completeness must
  // never rest on the restriction being propagation-complete.
  int fallback_branch_var() const {
    if (decidable_.empty()) return -1;
    for (std::uint32_t v = 0; v < assigns_.size(); ++v)
      if (assigns_[v] < 0) return static_cast<int>(v);
    return -1;
  }

  bool is_decidable(std::uint32_t v) const { return decidable_.empty() || decidable_[v] != 0; }

  // ---- learnt DB reduction (only at decision level 0) ----
  void reduce_db() {
    ++reduces_;
    std::sort(learnts_.begin(), learnts_.end(), [this](std::uint32_t a, std::uint32_t b) {
      const std::uint32_t la = arena_[a + 1], lb = arena_[b + 1];
      if (la != lb) return la < lb;
      const float aa = clause_act(a), ab = clause_act(b);
      if (aa != ab) return aa > ab;
      return a < b;
    });
    std::size_t keep = learnts_.size() / 2;
    while (keep < learnts_.size() && arena_[learnts_[keep] + 1] <= 2) ++keep;  // keep glue
    learnts_.resize(keep);
    relocate();
  }

  void relocate() {
    // Level-0 reasons are never dereferenced by analyze; drop them so no
    // stale arena offsets survive the move.
    for (std::uint32_t p : trail_) reason_[ilit_var(p)] = cref_none;

    std::vector<std::uint32_t> fresh;
    fresh.reserve(arena_.size() / 2 + 16);
    auto move = [&](std::uint32_t cr) {
      const std::uint32_t nr = static_cast<std::uint32_t>(fresh.size());
      const std::uint32_t words = 3 + clause_size(cr);
      fresh.insert(fresh.end(), arena_.begin() + cr, arena_.begin() + cr + words);
      return nr;
    };
    for (std::uint32_t& cr : clauses_) cr = move(cr);
    for (std::uint32_t& cr : learnts_) cr = move(cr);
    arena_.swap(fresh);

    for (auto& ws : watches_) ws.clear();
    for (auto& ws : watches_bin_) ws.clear();
    for (std::uint32_t cr : clauses_) attach(cr);
    for (std::uint32_t cr : learnts_) attach(cr);
  }


  void grow_to(int vars) {
    const std::size_t v = static_cast<std::size_t>(vars);
    assigns_.resize(v, -1);
    polarity_.resize(v, 0);
    reason_.resize(v, cref_none);
    level_.resize(v, 0);
    activity_.resize(v, 0.0);
    seen_.resize(v, 0);
    heap_pos_.resize(v, -1);
    watches_.resize(2 * v);
    watches_bin_.resize(2 * v);
    lbd_seen_.resize(v + 2, 0);
    if (!decidable_.empty()) decidable_.resize(v, 1);
    for (int i = 0; i < vars; ++i)
      if (heap_pos_[static_cast<std::size_t>(i)] < 0 && assigns_[static_cast<std::size_t>(i)] < 0 &&
          is_decidable(static_cast<std::uint32_t>(i)))
        heap_insert(i);
  }

  decision_mode mode_;
  bool ok_ = true;
  std::vector<std::uint32_t> arena_;
  std::vector<std::uint32_t> clauses_, learnts_;
  std::vector<std::vector<watcher>> watches_;
  std::vector<std::vector<watcher>> watches_bin_;  // size-2 clauses, never moved
  std::vector<std::int8_t> assigns_;
  std::vector<std::uint8_t> polarity_;
  std::vector<std::uint32_t> reason_;
  std::vector<int> level_;
  std::vector<std::uint32_t> trail_, trail_lim_;
  std::uint32_t qhead_ = 0;
  std::vector<double> activity_;
  std::vector<std::uint8_t> decidable_;  // empty = all variables decidable
  double var_inc_ = 1.0;
  float cla_inc_ = 1.0f;
  std::vector<std::uint8_t> seen_;
  std::vector<int> heap_;
  std::vector<int> heap_pos_;
  std::vector<std::uint64_t> lbd_seen_;
  std::uint64_t lbd_stamp_ = 0;
  std::uint64_t conflicts_ = 0;
  int reduces_ = 0;
  std::uint64_t reduce_at_ = 2000;  // next scheduled DB reduction (conflicts_)
  double lbd_fast_ = 0.0, lbd_slow_ = 0.0, trail_avg_ = 0.0;
  std::uint32_t fixed_hint_ = 0;
  std::vector<std::uint32_t> learnt_;
  std::vector<std::uint32_t> to_clear_;
  std::vector<std::uint32_t> analyze_stack_;
  std::vector<std::int8_t> model_;
};

// ---- external DIMACS solver adapter ----

struct external_result {
  bool sat = false;
  std::vector<bool> model;  // 1-based var -> value, valid when sat
};

// Runs `cmd <dimacs-file>` and parses SAT-competition style output
// ("s SATISFIABLE"/"s UNSATISFIABLE", "v " literal lines).
inline external_result solve_external(const cnf_formula& f, const std::string& cmd) {
  if (cmd.empty()) throw invalid_input("external solver: empty command");
  char in_path[] = "/tmp/vsl_cnf_XXXXXX";
  const int in_fd = mkstemp(in_path);
  if (in_fd < 0) throw backend_error("external solver: cannot create temp file");
  char out_path[] = "/tmp/vsl_out_XXXXXX";
  const int out_fd = mkstemp(out_path);
  if (out_fd < 0) {
    close(in_fd);
    std::remove(in_path);
    throw backend_error("external solver: cannot create temp file");
  }
  close(in_fd);
  close(out_fd);

  {
    std::ofstream os(in_path);
    write_dimacs(os, f);
  }
  const std::string full = cmd + " " + in_path + " > " + out_path + " 2>/dev/null";
  const int rc = std::system(full.c_str());

  std::string verdict;
  std::vector<lit> values;
  {
    std::ifstream is(out_path);
    std::string line;
    while (std::getline(is, line)) {
      if (line.rfind("s ", 0) == 0) verdict = line.substr(2);
      else if (line.rfind("v ", 0) == 0) {
        std::istringstream ls(line.substr(2));
        lit x;
        while (ls >> x)
          if (x != 0) values.push_back(x);
      }
    }
  }
  std::remove(in_path);
  std::remove(out_path);

  if (rc != -1 && WIFEXITED(rc) && WEXITSTATUS(rc) == 124)
    throw backend_error("external solver: timeout");
  external_result res;
  if (verdict.rfind("UNSATISFIABLE", 0) == 0) {
    res.sat = false;
    return res;
  }
  if (verdict.rfind("SATISFIABLE", 0) == 0) {
    res.sat = true;
    res.model.assign(static_cast<std::size_t>(f.var_count) + 1, false);
    for (lit x : values) {
      const int v = x > 0 ? x : -x;
      if (v <= f.var_count) res.model[static_cast<std::size_t>(v)] = x > 0;
    }
    return res;
  }
  throw backend_error("external solver: no verdict in output (exit status " +
                      std::to_string(rc) + ")");
}

}  // namespace vsl::sat
