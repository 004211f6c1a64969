#include "espc/rule_store.hpp"

#include <algorithm>
#include <ostream>
#include <string>

namespace espc {

namespace {

constexpr std::size_t kInitialSlots = 1024;

}  // namespace

RuleStore::RuleStore(std::uint64_t sigma, double alpha) : sigma_(sigma), alpha_(alpha) {
  if (sigma == 0) throw PreconditionError("alphabet size must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("load factor must lie in (0, 1)");
  table_.assign(kInitialSlots, 0);
  mask_ = kInitialSlots - 1;
}

std::uint64_t RuleStore::mix(Symbol left, Symbol right) noexcept {
  std::uint64_t h = left * 0x9E3779B97F4A7C15ULL ^ (right + 0x632BE59BD9B4E019ULL + (left << 6) + (left >> 2));
  h ^= h >> 33;
  h *= 0xFF51AFD7ED558CCDULL;
  h ^= h >> 33;
  h *= 0xC4CEB9FE1A85EC53ULL;
  h ^= h >> 33;
  return h;
}

void RuleStore::check_defined(Symbol s, const char* what) const {
  if (!is_defined(s)) {
    throw PreconditionError(std::string(what) + ": undefined symbol " + std::to_string(s));
  }
}

Symbol RuleStore::find(Symbol left, Symbol right) const noexcept {
  for (std::uint64_t i = mix(left, right) & mask_;; i = (i + 1) & mask_) {
    const std::uint64_t slot = table_[i];
    if (slot == 0) return kNoSymbol;
    const Rule& r = rules_[slot - 1];
    if (r.left == left && r.right == right) return sigma_ + slot - 1;
  }
}

void RuleStore::grow() {
  std::vector<std::uint64_t> next(table_.size() * 2, 0);
  const std::uint64_t mask = next.size() - 1;
  for (std::uint64_t slot : table_) {
    if (slot == 0) continue;
    const Rule& r = rules_[slot - 1];
    std::uint64_t i = mix(r.left, r.right) & mask;
    while (next[i] != 0) i = (i + 1) & mask;
    next[i] = slot;
  }
  table_ = std::move(next);
  mask_ = mask;
}

InternResult RuleStore::intern(Symbol left, Symbol right) {
  check_defined(left, "intern");
  check_defined(right, "intern");
  std::uint64_t i = mix(left, right) & mask_;
  for (;; i = (i + 1) & mask_) {
    const std::uint64_t slot = table_[i];
    if (slot == 0) break;
    const Rule& r = rules_[slot - 1];
    if (r.left == left && r.right == right) return {sigma_ + slot - 1, false};
  }
  if (symbol_count() == kNoSymbol) throw ResourceError("symbol space exhausted");
  rules_.push_back({left, right});
  lengths_.push_back(length(left) + length(right));
  table_[i] = rules_.size();
  if (static_cast<double>(rules_.size()) > alpha_ * static_cast<double>(table_.size())) grow();
  return {symbol_count() - 1, true};
}

const Rule& RuleStore::rule(Symbol variable) const {
  check_defined(variable, "rule");
  if (is_terminal(variable)) throw PreconditionError("rule: terminal has no production");
  return rules_[variable - sigma_];
}

std::uint64_t RuleStore::length(Symbol s) const {
  check_defined(s, "length");
  return is_terminal(s) ? 1 : lengths_[s - sigma_];
}

std::uint64_t RuleStore::height(Symbol s) const {
  check_defined(s, "height");
  if (is_terminal(s)) return 0;
  // Children always have smaller ids, so one forward pass suffices.
  const std::uint64_t last = s - sigma_;
  std::vector<std::uint32_t> h(last + 1, 0);
  auto of = [&](Symbol x) -> std::uint32_t { return is_terminal(x) ? 0 : h[x - sigma_]; };
  for (std::uint64_t k = 0; k <= last; ++k) {
    h[k] = 1 + std::max(of(rules_[k].left), of(rules_[k].right));
  }
  return h[last];
}

void RuleStore::expand(Symbol s, std::ostream& os) const {
  std::string buf;
  buf.reserve(1 << 16);
  expand(s, [&](Symbol c) {
    buf.push_back(static_cast<char>(c));
    if (buf.size() == buf.capacity()) {
      os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  });
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

LevelString RuleStore::expand(Symbol s) const {
  LevelString out;
  out.reserve(length(s));
  expand(s, [&](Symbol c) { out.push_back(c); });
  return out;
}

std::size_t RuleStore::memory_bytes() const noexcept {
  return rules_.capacity() * sizeof(Rule) + lengths_.capacity() * sizeof(std::uint64_t) +
         table_.capacity() * sizeof(std::uint64_t);
}

}  // namespace espc
