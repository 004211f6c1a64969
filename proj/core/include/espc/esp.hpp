#pragma once

// Offline edit-sensitive parsing: segmentation, alphabet reduction,
// landmarks and level-by-level tree construction. The streaming compressor
// is checked against build_offline.

#include <cstdint>
#include <span>
#include <vector>

#include "espc/rule_store.hpp"
#include "espc/types.hpp"

namespace espc {

// lg* n = min{ i : lg^(i) n <= 1 }; lg*(1) = 0.
unsigned iter_log(std::uint64_t n);

struct ReductionConfig {
  // Symbol-universe bound; fixed for the lifetime of a compression.
  std::uint64_t universe = std::numeric_limits<std::uint64_t>::max();
  unsigned iterations = 5;  // lg* universe
  unsigned window = 5;      // max{5, lg* universe}

  static ReductionConfig for_universe(std::uint64_t universe);

  // Repetition-free runs at least this long are parsed by landmarks.
  std::size_t type2_min_length() const noexcept { return 2 * static_cast<std::size_t>(iterations); }
};

// Labels of one or more alphabet-reduction rounds. labels[i] is meaningful
// only for i >= defined_from (0-based).
struct LabelSeq {
  std::vector<std::uint64_t> labels;
  std::size_t defined_from = 0;

  std::size_t size() const noexcept { return labels.size(); }
  bool defined(std::size_t i) const noexcept { return i >= defined_from && i < labels.size(); }
};

// Label of `cur` given its left neighbour: 2p + bit(p, cur), p = lowest set
// bit of prev ^ cur. Requires prev != cur.
inline std::uint64_t reduce_label(std::uint64_t prev, std::uint64_t cur) noexcept {
  const unsigned p = static_cast<unsigned>(__builtin_ctzll(prev ^ cur));
  return 2 * p + ((cur >> p) & 1U);
}

LabelSeq reduce_once(std::span<const Symbol> v);
LabelSeq reduce_full(std::span<const Symbol> v, const ReductionConfig& cfg);

// Strict local maxima of the defined label range, 0-based, ascending.
std::vector<std::size_t> find_landmarks(const LabelSeq& labels);

enum class SegmentKind { Type1, Type2, Type3 };

// Half-open [begin, end), 0-based.
struct Segment {
  SegmentKind kind;
  std::size_t begin;
  std::size_t end;

  std::size_t length() const noexcept { return end - begin; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

std::vector<Segment> segment(std::span<const Symbol> s, const ReductionConfig& cfg);

// Block lengths (2 or 3) of the left-aligned parsing of a run of `length`.
std::vector<std::uint8_t> left_aligned_blocks(std::size_t length);
// Block lengths of a Type2 run under landmark parsing.
std::vector<std::uint8_t> type2_blocks(std::span<const Symbol> v, const ReductionConfig& cfg);

// Applies one block to the sink: a 2-tree X -> ab, or a 2-2-tree
// Y -> aX, X -> bc. Returns the top variable.
Symbol emit_block(std::span<const Symbol> block, RuleSink& sink);

LevelString left_aligned_parse(std::span<const Symbol> v, RuleSink& sink);
LevelString parse_type2(std::span<const Symbol> v, const ReductionConfig& cfg, RuleSink& sink);
LevelString esp_round(std::span<const Symbol> s, const ReductionConfig& cfg, RuleSink& sink);

// Iterates esp_round until one symbol is left and returns it. A single-symbol
// input yields that symbol and no rules.
Symbol build_offline(std::span<const Symbol> s, const ReductionConfig& cfg, RuleSink& sink);

}  // namespace espc
