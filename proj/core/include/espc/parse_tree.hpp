#pragma once

#include <cstdint>
#include <vector>

#include "espc/rule_store.hpp"
#include "espc/types.hpp"

namespace espc {

// Read-only view of the full parse tree of `root`, navigated through the
// grammar without materializing nodes. Positions are 0-based; a node
// labeled X starting at b derives S[b, b + |val(X)|).
class ParseTree {
 public:
  ParseTree(const RuleStore& store, Symbol root);

  const RuleStore& store() const noexcept { return *store_; }
  Symbol root() const noexcept { return root_; }
  std::uint64_t length() const { return store_->length(root_); }

  bool contains(Symbol s) const;
  // Number of nodes labeled `s` in the tree (terminals count leaves).
  std::uint64_t occurrences(Symbol s) const;

  // Calls visit(symbol, begin) for every internal node whose interval lies
  // inside [l, r), in pre-order.
  template <typename Visit>
  void nodes_within(std::uint64_t l, std::uint64_t r, Visit&& visit) const;

  // True iff some node labeled `x` derives a subinterval of [l, r).
  bool has_node_within(Symbol x, std::uint64_t l, std::uint64_t r) const;

 private:
  const RuleStore* store_;
  Symbol root_;
  std::vector<std::uint64_t> counts_;  // per variable, saturating
  std::vector<std::uint64_t> terminal_counts_;
};

template <typename Visit>
void ParseTree::nodes_within(std::uint64_t l, std::uint64_t r, Visit&& visit) const {
  struct Frame {
    Symbol s;
    std::uint64_t begin;
  };
  std::vector<Frame> stack{{root_, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (store_->is_terminal(f.s)) continue;
    const std::uint64_t end = f.begin + store_->length(f.s);
    if (end <= l || f.begin >= r) continue;
    if (f.begin >= l && end <= r) visit(f.s, f.begin);
    const Rule& rule = store_->rule(f.s);
    stack.push_back({rule.right, f.begin + store_->length(rule.left)});
    stack.push_back({rule.left, f.begin});
  }
}

}  // namespace espc
