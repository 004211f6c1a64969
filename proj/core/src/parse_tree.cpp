#include "espc/parse_tree.hpp"

#include <limits>
#include <string>

namespace espc {

namespace {

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

}  // namespace

ParseTree::ParseTree(const RuleStore& store, Symbol root) : store_(&store), root_(root) {
  if (!store.is_defined(root)) throw PreconditionError("ParseTree: undefined root " + std::to_string(root));
  const std::uint64_t sigma = store.sigma();
  terminal_counts_.assign(sigma, 0);
  if (store.is_terminal(root)) {
    terminal_counts_[root] = 1;
    return;
  }
  // Children have smaller ids than parents: push counts downward in
  // decreasing id order.
  counts_.assign(root - sigma + 1, 0);
  counts_.back() = 1;
  auto add = [&](Symbol child, std::uint64_t c) {
    if (store.is_terminal(child)) {
      terminal_counts_[child] = saturating_add(terminal_counts_[child], c);
    } else {
      counts_[child - sigma] = saturating_add(counts_[child - sigma], c);
    }
  };
  for (std::uint64_t k = counts_.size(); k-- > 0;) {
    if (counts_[k] == 0) continue;
    const Rule& r = store.rules()[k];
    add(r.left, counts_[k]);
    add(r.right, counts_[k]);
  }
}

bool ParseTree::contains(Symbol s) const { return store_->is_defined(s) && occurrences(s) > 0; }

std::uint64_t ParseTree::occurrences(Symbol s) const {
  if (store_->is_terminal(s)) return terminal_counts_[s];
  const std::uint64_t k = s - store_->sigma();
  return k < counts_.size() ? counts_[k] : 0;
}

bool ParseTree::has_node_within(Symbol x, std::uint64_t l, std::uint64_t r) const {
  if (!contains(x)) throw PreconditionError("symbol " + std::to_string(x) + " does not occur in the parse tree");
  const std::uint64_t xlen = store_->length(x);
  if (r < l || r - l < xlen) return false;
  struct Frame {
    Symbol s;
    std::uint64_t begin;
  };
  std::vector<Frame> stack{{root_, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    const std::uint64_t len = store_->length(f.s);
    const std::uint64_t end = f.begin + len;
    if (len < xlen || end <= l || f.begin >= r) continue;
    if (f.s == x && f.begin >= l && end <= r) return true;
    if (store_->is_terminal(f.s)) continue;
    const Rule& rule = store_->rule(f.s);
    stack.push_back({rule.right, f.begin + store_->length(rule.left)});
    stack.push_back({rule.left, f.begin});
  }
  return false;
}

}  // namespace espc
