#pragma once

#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "espc/types.hpp"

namespace espc {

struct Rule {
  Symbol left = kNoSymbol;
  Symbol right = kNoSymbol;

  friend bool operator==(const Rule&, const Rule&) = default;
};

// Consumer of production requests. The parser asks for a variable deriving
// (left, right); implementations must answer deterministically.
class RuleSink {
 public:
  virtual ~RuleSink() = default;
  virtual Symbol produce(Symbol left, Symbol right) = 0;
};

struct InternResult {
  Symbol symbol;
  bool fresh;
};

// Binary production rules with expansion lengths and a reverse dictionary
// (left, right) -> variable backed by an open-addressing table.
class RuleStore final : public RuleSink {
 public:
  explicit RuleStore(std::uint64_t sigma = kByteAlphabet, double alpha = 0.8);

  std::uint64_t sigma() const noexcept { return sigma_; }
  double alpha() const noexcept { return alpha_; }
  // Number of variables n.
  std::uint64_t size() const noexcept { return rules_.size(); }
  std::uint64_t symbol_count() const noexcept { return sigma_ + rules_.size(); }

  bool is_terminal(Symbol s) const noexcept { return s < sigma_; }
  bool is_defined(Symbol s) const noexcept { return s < symbol_count(); }

  InternResult intern(Symbol left, Symbol right);
  Symbol produce(Symbol left, Symbol right) override { return intern(left, right).symbol; }

  // Reverse-dictionary lookup without insertion; kNoSymbol when absent.
  Symbol find(Symbol left, Symbol right) const noexcept;

  const Rule& rule(Symbol variable) const;
  std::uint64_t length(Symbol s) const;
  const std::vector<Rule>& rules() const noexcept { return rules_; }

  // Height of the parse tree rooted at s (terminals have height 0).
  std::uint64_t height(Symbol s) const;

  // Writes val(s) left to right using O(height) auxiliary memory.
  template <typename Out>
    requires std::invocable<Out&, Symbol>
  void expand(Symbol s, Out&& out) const;
  void expand(Symbol s, std::ostream& os) const;
  LevelString expand(Symbol s) const;

  // Approximate heap footprint in bytes.
  std::size_t memory_bytes() const noexcept;

 private:
  static std::uint64_t mix(Symbol left, Symbol right) noexcept;
  void grow();
  void check_defined(Symbol s, const char* what) const;

  std::uint64_t sigma_;
  double alpha_;
  std::vector<Rule> rules_;
  std::vector<std::uint64_t> lengths_;
  // slot value 0 = empty, otherwise (variable index + 1)
  std::vector<std::uint64_t> table_;
  std::uint64_t mask_ = 0;
};

template <typename Out>
  requires std::invocable<Out&, Symbol>
void RuleStore::expand(Symbol s, Out&& out) const {
  check_defined(s, "expand");
  std::vector<Symbol> stack{s};
  while (!stack.empty()) {
    Symbol top = stack.back();
    stack.pop_back();
    while (!is_terminal(top)) {
      const Rule& r = rules_[top - sigma_];
      stack.push_back(r.right);
      top = r.left;
    }
    out(top);
  }
}

}  // namespace espc
