#pragma once

// Reduced ordered binary decision diagrams: hash-consed unique table, memoized
// apply over a fixed global variable order, arbitrary-precision minterm
// counting and deterministic minterm enumeration. No complement edges, no
// reordering, no garbage collection — a manager owns its nodes until dropped.

#include <atomic>
#include <compare>
#include <cstdint>
#include <ostream>
#include <unordered_map>
#include <vector>

#include "vsl/bigint.hpp"
#include "vsl/core.hpp"

namespace vsl::bdd {

// Public handle: node index plus the owning manager's tag, so using a handle
// with the wrong manager is caught instead of silently misreading nodes.
struct handle {
  std::uint32_t index = 0;
  std::uint32_t tag = 0;
  friend bool operator==(const handle&, const handle&) = default;
  friend auto operator<=>(const handle&, const handle&) = default;
};

enum class bool_op : std::uint8_t { op_and = 0, op_or = 1, op_xnor = 2 };

class manager {
public:
  explicit manager(std::uint32_t variable_count, std::size_t max_nodes = 0)
      : var_count_(variable_count), max_nodes_(max_nodes), tag_(next_tag()) {
    // Terminals sit at fixed indices with a var past every real variable so
    // the top-variable comparisons in apply need no special casing.
    nodes_.push_back({terminal_var, 0, 0});
    nodes_.push_back({terminal_var, 1, 1});
    grow_unique(1u << 14);
    grow_cache(1u << 14);
  }

  manager(const manager&) = delete;
  manager& operator=(const manager&) = delete;

  std::uint32_t variable_count() const { return var_count_; }
  std::size_t allocated_nodes() const { return nodes_.size() - 2; }

  handle zero() const { return wrap(zero_ref); }
  handle one() const { return wrap(one_ref); }

  // Polled inside node construction; lets a race loser abandon large applies.
  void set_cancel_flag(const std::atomic<bool>* flag) { cancel_ = flag; }

  handle mk_const(bool bit) const { return bit ? one() : zero(); }

  handle mk_var(std::uint32_t index) {
    if (index >= var_count_) throw invalid_input("bdd: variable index out of range");
    return wrap(mk(index, zero_ref, one_ref));
  }

  handle apply(bool_op op, handle f, handle g) {
    return wrap(apply_rec(op, unwrap(f), unwrap(g)));
  }

  handle apply_and(handle f, handle g) { return apply(bool_op::op_and, f, g); }
  handle apply_or(handle f, handle g) { return apply(bool_op::op_or, f, g); }
  handle apply_xnor(handle f, handle g) { return apply(bool_op::op_xnor, f, g); }

  // XNOR against ZERO is complement; shares the apply cache.
  handle negate(handle f) { return apply(bool_op::op_xnor, f, zero()); }

  // Satisfying-assignment count over exactly `over_vars` variables.
  big_uint count_minterms(handle f, std::uint32_t over_vars) {
    const node_ref r = unwrap(f);
    if (over_vars > var_count_)
      throw invalid_input("bdd: over_vars exceeds manager variable count");
    std::unordered_map<node_ref, big_uint> memo;
    const big_uint c = count_rec(r, over_vars, memo);
    return c * suffix_weight(r, 0, over_vars);
  }

  // Up to `limit` satisfying total assignments, low variable first, 0-branch
  // first — i.e. ascending as binary strings with variable 0 most significant.
  struct enumeration {
    std::vector<std::vector<std::uint8_t>> assignments;
    bool more_remaining = false;
  };

  enumeration enumerate_minterms(handle f, std::uint32_t over_vars, std::size_t limit) {
    const node_ref r = unwrap(f);
    if (over_vars > var_count_)
      throw invalid_input("bdd: over_vars exceeds manager variable count");
    require_within(r, over_vars);
    enumeration out;
    std::vector<std::uint8_t> path(over_vars, 0);
    enumerate_rec(r, 0, over_vars, limit, path, out);
    return out;
  }

  std::size_t node_count(handle f) const {
    const node_ref root = unwrap(f);
    if (root <= one_ref) return 0;
    std::vector<node_ref> stack{root};
    std::unordered_map<node_ref, bool> seen;
    seen.emplace(root, true);
    std::size_t count = 0;
    while (!stack.empty()) {
      const node_ref t = stack.back();
      stack.pop_back();
      ++count;
      for (node_ref c : {nodes_[t].low, nodes_[t].high})
        if (c > one_ref && seen.emplace(c, true).second) stack.push_back(c);
    }
    return count;
  }

  void dump_dot(handle f, std::ostream& os) const {
    const node_ref root = unwrap(f);
    os << "digraph bdd {\n  node [shape=circle];\n"
       << "  t0 [shape=box,label=\"0\"];\n  t1 [shape=box,label=\"1\"];\n";
    auto name = [](node_ref t) {
      return t == zero_ref ? std::string("t0")
                           : t == one_ref ? std::string("t1") : "n" + std::to_string(t);
    };
    if (root > one_ref) {
      std::vector<node_ref> stack{root};
      std::unordered_map<node_ref, bool> seen;
      seen.emplace(root, true);
      while (!stack.empty()) {
        const node_ref t = stack.back();
        stack.pop_back();
        os << "  n" << t << " [label=\"v" << nodes_[t].var << "\"];\n";
        os << "  n" << t << " -> " << name(nodes_[t].low) << " [style=dashed];\n";
        os << "  n" << t << " -> " << name(nodes_[t].high) << ";\n";
        for (node_ref c : {nodes_[t].low, nodes_[t].high})
          if (c > one_ref && seen.emplace(c, true).second) stack.push_back(c);
      }
    }
    os << "}\n";
  }

private:
  using node_ref = std::uint32_t;
  static constexpr node_ref zero_ref = 0;
  static constexpr node_ref one_ref = 1;
  static constexpr std::uint32_t terminal_var = 0xffffffffu;

  struct node {
    std::uint32_t var;
    node_ref low;
    node_ref high;
  };

  struct cache_entry {
    std::uint64_t key = ~std::uint64_t{0};
    std::uint32_t op = 0;
    node_ref result = 0;
  };

  static std::uint32_t next_tag() {
    static std::atomic<std::uint32_t> counter{1};
    return counter.fetch_add(1, std::memory_order_relaxed);
  }

  handle wrap(node_ref r) const { return handle{r, tag_}; }

  node_ref unwrap(handle h) const {
    if (h.tag != tag_ || h.index >= nodes_.size())
      throw invalid_input("bdd: handle does not belong to this manager");
    return h.index;
  }

  std::uint32_t var_of(node_ref t) const { return nodes_[t].var; }

  static std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
  }

  std::uint64_t node_hash(std::uint32_t var, node_ref low, node_ref high) const {
    return mix((std::uint64_t(var) << 40) ^ (std::uint64_t(low) << 20) ^ high ^
               (std::uint64_t(high) << 44));
  }

  void grow_unique(std::size_t capacity) {
    unique_.assign(capacity, 0);
    unique_mask_ = capacity - 1;
    for (node_ref t = 2; t < nodes_.size(); ++t) unique_insert(t);
  }

  void unique_insert(node_ref t) {
    std::size_t slot = node_hash(nodes_[t].var, nodes_[t].low, nodes_[t].high) & unique_mask_;
    while (unique_[slot] != 0) slot = (slot + 1) & unique_mask_;
    unique_[slot] = t;
  }

  node_ref mk(std::uint32_t var, node_ref low, node_ref high) {
    if (low == high) return low;
    std::size_t slot = node_hash(var, low, high) & unique_mask_;
    while (unique_[slot] != 0) {
      const node& cand = nodes_[unique_[slot]];
      if (cand.var == var && cand.low == low && cand.high == high) return unique_[slot];
      slot = (slot + 1) & unique_mask_;
    }
    if (max_nodes_ && nodes_.size() - 2 >= max_nodes_)
      throw resource_limit("bdd: node budget exhausted");
    if (++ticks_ % 8192 == 0 && cancel_ && cancel_->load(std::memory_order_relaxed))
      throw cancelled("bdd: operation cancelled");
    const node_ref t = static_cast<node_ref>(nodes_.size());
    nodes_.push_back({var, low, high});
    unique_[slot] = t;
    if (nodes_.size() * 10 > unique_.size() * 7) grow_unique(unique_.size() * 2);
    if (nodes_.size() > cache_.size() && cache_.size() < (1u << 22))
      grow_cache(cache_.size() * 2);
    return t;
  }

  void grow_cache(std::size_t capacity) {
    cache_.assign(capacity, cache_entry{});
    cache_mask_ = capacity - 1;
  }

  node_ref apply_rec(bool_op op, node_ref f, node_ref g) {
    switch (op) {
      case bool_op::op_and:
        if (f == g) return f;
        if (f == zero_ref || g == zero_ref) return zero_ref;
        if (f == one_ref) return g;
        if (g == one_ref) return f;
        break;
      case bool_op::op_or:
        if (f == g) return f;
        if (f == one_ref || g == one_ref) return one_ref;
        if (f == zero_ref) return g;
        if (g == zero_ref) return f;
        break;
      case bool_op::op_xnor:
        if (f == g) return one_ref;
        if (f <= one_ref && g <= one_ref) return zero_ref;  // distinct terminals
        if (f == one_ref) return g;
        if (g == one_ref) return f;
        break;
    }
    if (f > g) std::swap(f, g);  // all three ops are commutative

    const std::uint64_t key = (std::uint64_t(f) << 32) | g;
    const std::uint64_t hashed = mix(key ^ (std::uint64_t(op) << 62));
    {
      const cache_entry& hit = cache_[hashed & cache_mask_];
      if (hit.key == key && hit.op == static_cast<std::uint32_t>(op)) return hit.result;
    }

    const std::uint32_t vf = var_of(f), vg = var_of(g);
    const std::uint32_t v = vf < vg ? vf : vg;
    const node_ref f0 = vf == v ? nodes_[f].low : f;
    const node_ref f1 = vf == v ? nodes_[f].high : f;
    const node_ref g0 = vg == v ? nodes_[g].low : g;
    const node_ref g1 = vg == v ? nodes_[g].high : g;
    const node_ref low = apply_rec(op, f0, g0);
    const node_ref high = apply_rec(op, f1, g1);
    const node_ref result = mk(v, low, high);

    // mk may have grown (and reallocated) the cache; re-index, never hold a
    // reference across it.
    cache_entry& slot = cache_[hashed & cache_mask_];
    slot.key = key;
    slot.op = static_cast<std::uint32_t>(op);
    slot.result = result;
    return result;
  }

  // 2^(gap between a parent position and a child's variable), child exclusive.
  big_uint suffix_weight(node_ref child, std::uint32_t from_var, std::uint32_t over_vars) const {
    const std::uint32_t v = child <= one_ref ? over_vars : var_of(child);
    return pow2(v - from_var);
  }

  big_uint count_rec(node_ref t, std::uint32_t over_vars,
                     std::unordered_map<node_ref, big_uint>& memo) {
    if (t == zero_ref) return 0;
    if (t == one_ref) return 1;
    if (var_of(t) >= over_vars)
      throw invalid_input("bdd: over_vars smaller than a variable in the diagram");
    const auto it = memo.find(t);
    if (it != memo.end()) return it->second;
    const std::uint32_t v = var_of(t);
    big_uint total =
        count_rec(nodes_[t].low, over_vars, memo) * suffix_weight(nodes_[t].low, v + 1, over_vars) +
        count_rec(nodes_[t].high, over_vars, memo) * suffix_weight(nodes_[t].high, v + 1, over_vars);
    memo.emplace(t, total);
    return total;
  }

  void require_within(node_ref f, std::uint32_t over_vars) const {
    std::vector<node_ref> stack{f};
    std::unordered_map<node_ref, bool> seen;
    while (!stack.empty()) {
      const node_ref t = stack.back();
      stack.pop_back();
      if (t <= one_ref || !seen.emplace(t, true).second) continue;
      if (var_of(t) >= over_vars)
        throw invalid_input("bdd: over_vars smaller than a variable in the diagram");
      stack.push_back(nodes_[t].low);
      stack.push_back(nodes_[t].high);
    }
  }

  void enumerate_rec(node_ref t, std::uint32_t pos, std::uint32_t over_vars, std::size_t limit,
                     std::vector<std::uint8_t>& path, enumeration& out) const {
    if (t == zero_ref) return;
    if (out.assignments.size() >= limit) {
      out.more_remaining = true;  // something satisfiable was left unexplored
      return;
    }
    if (pos == over_vars) {
      out.assignments.push_back(path);
      return;
    }
    const std::uint32_t v = t <= one_ref ? over_vars : var_of(t);
    if (pos < v) {  // free variable: expand both branches in 0-then-1 order
      path[pos] = 0;
      enumerate_rec(t, pos + 1, over_vars, limit, path, out);
      path[pos] = 1;
      enumerate_rec(t, pos + 1, over_vars, limit, path, out);
      return;
    }
    path[pos] = 0;
    enumerate_rec(nodes_[t].low, pos + 1, over_vars, limit, path, out);
    path[pos] = 1;
    enumerate_rec(nodes_[t].high, pos + 1, over_vars, limit, path, out);
  }

  std::uint32_t var_count_;
  std::size_t max_nodes_;
  std::uint32_t tag_;
  std::vector<node> nodes_;
  std::vector<node_ref> unique_;
  std::size_t unique_mask_ = 0;
  std::vector<cache_entry> cache_;
  std::size_t cache_mask_ = 0;
  std::uint64_t ticks_ = 0;
  const std::atomic<bool>* cancel_ = nullptr;
};

}  // namespace vsl::bdd
