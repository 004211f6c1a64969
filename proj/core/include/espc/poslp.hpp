#pragma once

// Succinct post-order SLP: skeleton bits B of the post-order partial parse
// tree (0 = leaf, 1 = internal node, trailing 1 = super root) and the leaf
// label sequence L. Variables are numbered sigma, sigma+1, ... in post-order.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "espc/rank_select.hpp"
#include "espc/rule_store.hpp"
#include "espc/types.hpp"

namespace espc {

struct Poslp {
  RankSelectBits bits;          // B
  std::vector<Symbol> leaves;   // L
  std::uint64_t sigma = kByteAlphabet;
  std::uint64_t n = 0;          // variable count
  Symbol root = kNoSymbol;      // kNoSymbol for the empty grammar

  bool empty() const noexcept { return root == kNoSymbol; }
  // Label of the leaf whose 0-bit sits at 1-based position `pos` of B.
  Symbol leaf_at(std::uint64_t pos) const;
  // Width in bits of one serialized leaf label: ceil(lg(n + sigma)).
  unsigned label_width() const noexcept;

  friend bool operator==(const Poslp&, const Poslp&) = default;
};

// Post-order partial parse tree of the grammar reachable from root. The first
// occurrence of each variable is expanded, later ones become leaves.
Poslp to_poslp(const RuleStore& store, Symbol root);
// Empty grammar (input of length zero).
Poslp empty_poslp(std::uint64_t sigma = kByteAlphabet);

struct DecodedGrammar {
  RuleStore store;
  Symbol root;
};

// Inverse of to_poslp. Throws FormatError naming the offending bit offset.
DecodedGrammar from_poslp(const Poslp& p, double alpha = 0.8);

// Little-endian file format: "POSLP1\n\0", u64 sigma, u64 n, u64 root,
// u64 |B|, B packed LSB-first, u64 |L|, L at fixed width ceil(lg(n+sigma))
// packed LSB-first; each packed field zero-padded to a byte boundary.
void serialize(const Poslp& p, std::ostream& os);
Poslp deserialize(std::istream& is);

}  // namespace espc
