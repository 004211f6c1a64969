#include "espc/esp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace espc {

unsigned iter_log(std::uint64_t n) {
  if (n == 0) throw PreconditionError("iter_log: argument must be positive");
  long double x = static_cast<long double>(n);
  unsigned count = 0;
  while (x > 1.0L) {
    x = std::log2(x);
    ++count;
  }
  return count;
}

ReductionConfig ReductionConfig::for_universe(std::uint64_t universe) {
  if (universe < 2) throw PreconditionError("symbol universe must be at least 2");
  ReductionConfig cfg;
  cfg.universe = universe;
  cfg.iterations = iter_log(universe);
  cfg.window = std::max(5U, cfg.iterations);
  return cfg;
}

LabelSeq reduce_once(std::span<const Symbol> v) {
  if (v.size() < 2) throw PreconditionError("reduce_once: need at least two symbols");
  LabelSeq out;
  out.labels.assign(v.size(), 0);
  out.defined_from = 1;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] == v[i - 1]) {
      throw PreconditionError("reduce_once: adjacent equal symbols at position " + std::to_string(i));
    }
    out.labels[i] = reduce_label(v[i - 1], v[i]);
  }
  return out;
}

LabelSeq reduce_full(std::span<const Symbol> v, const ReductionConfig& cfg) {
  if (v.size() < cfg.type2_min_length()) {
    throw PreconditionError("reduce_full: input shorter than the type2 threshold");
  }
  LabelSeq cur = reduce_once(v);
  for (unsigned round = 1; round < cfg.iterations; ++round) {
    // Rewrite in place from the right; labels[i] only reads labels[i-1].
    for (std::size_t i = cur.size() - 1; i > cur.defined_from; --i) {
      cur.labels[i] = reduce_label(cur.labels[i - 1], cur.labels[i]);
    }
    ++cur.defined_from;
  }
  return cur;
}

std::vector<std::size_t> find_landmarks(const LabelSeq& seq) {
  std::vector<std::size_t> out;
  const auto& l = seq.labels;
  for (std::size_t i = seq.defined_from + 1; i + 1 < l.size(); ++i) {
    if (l[i] > l[i - 1] && l[i] > l[i + 1]) out.push_back(i);
  }
  return out;
}

std::vector<Segment> segment(std::span<const Symbol> s, const ReductionConfig& cfg) {
  if (s.size() < 2) throw PreconditionError("segment: need at least two symbols");

  // Alternating maximal repetitions and repetition-free runs.
  struct Item {
    bool repetition;
    std::size_t begin, end;
  };
  std::vector<Item> items;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t j = i + 1;
    while (j < s.size() && s[j] == s[i]) ++j;
    const bool rep = j - i >= 2;
    if (!rep && !items.empty() && !items.back().repetition) {
      items.back().end = j;
    } else {
      items.push_back({rep, i, j});
    }
    i = j;
  }

  // Length-1 free runs join the preceding repetition, else the following one.
  std::vector<Item> merged;
  for (std::size_t k = 0; k < items.size(); ++k) {
    const Item& it = items[k];
    if (!it.repetition && it.end - it.begin == 1 && items.size() > 1) {
      if (!merged.empty()) {
        merged.back().end = it.end;
      } else {
        Item next = items[++k];
        next.begin = it.begin;
        merged.push_back(next);
      }
      continue;
    }
    merged.push_back(it);
  }

  std::vector<Segment> out;
  out.reserve(merged.size());
  for (const Item& it : merged) {
    SegmentKind kind = SegmentKind::Type1;
    if (!it.repetition) {
      kind = it.end - it.begin >= cfg.type2_min_length() ? SegmentKind::Type2 : SegmentKind::Type3;
    }
    out.push_back({kind, it.begin, it.end});
  }
  return out;
}

std::vector<std::uint8_t> left_aligned_blocks(std::size_t length) {
  if (length < 2) throw PreconditionError("left_aligned_parse: need at least two symbols");
  std::vector<std::uint8_t> blocks(length / 2, 2);
  if (length % 2 == 1) blocks.back() = 3;
  return blocks;
}

std::vector<std::uint8_t> type2_blocks(std::span<const Symbol> v, const ReductionConfig& cfg) {
  const LabelSeq labels = reduce_full(v, cfg);
  const std::vector<std::size_t> landmarks = find_landmarks(labels);

  std::vector<std::uint8_t> blocks;
  // Residual [from, to) between replaced bigrams.
  auto residual = [&](std::size_t from, std::size_t to) {
    const std::size_t len = to - from;
    if (len == 0) return;
    if (len == 1) {
      // Only reachable after a landmark bigram; extend it to a 2-2-tree.
      if (blocks.empty()) throw std::logic_error("type2 residual of length one without left block");
      blocks.back() = 3;
      return;
    }
    for (std::uint8_t b : left_aligned_blocks(len)) blocks.push_back(b);
  };

  std::size_t pos = 0;
  for (std::size_t lm : landmarks) {
    residual(pos, lm);
    blocks.push_back(2);
    pos = lm + 2;
  }
  residual(pos, v.size());
  return blocks;
}

Symbol emit_block(std::span<const Symbol> block, RuleSink& sink) {
  if (block.size() == 2) return sink.produce(block[0], block[1]);
  if (block.size() == 3) {
    const Symbol inner = sink.produce(block[1], block[2]);
    return sink.produce(block[0], inner);
  }
  throw std::logic_error("blocks have two or three symbols");
}

namespace {

void apply_blocks(std::span<const Symbol> v, const std::vector<std::uint8_t>& blocks, RuleSink& sink,
                  LevelString& out) {
  std::size_t pos = 0;
  for (std::uint8_t b : blocks) {
    out.push_back(emit_block(v.subspan(pos, b), sink));
    pos += b;
  }
}

}  // namespace

LevelString left_aligned_parse(std::span<const Symbol> v, RuleSink& sink) {
  LevelString out;
  apply_blocks(v, left_aligned_blocks(v.size()), sink, out);
  return out;
}

LevelString parse_type2(std::span<const Symbol> v, const ReductionConfig& cfg, RuleSink& sink) {
  LevelString out;
  apply_blocks(v, type2_blocks(v, cfg), sink, out);
  return out;
}

LevelString esp_round(std::span<const Symbol> s, const ReductionConfig& cfg, RuleSink& sink) {
  LevelString out;
  out.reserve(s.size() / 2 + 1);
  for (const Segment& seg : segment(s, cfg)) {
    const auto v = s.subspan(seg.begin, seg.length());
    if (seg.kind == SegmentKind::Type2) {
      apply_blocks(v, type2_blocks(v, cfg), sink, out);
    } else {
      apply_blocks(v, left_aligned_blocks(v.size()), sink, out);
    }
  }
  return out;
}

Symbol build_offline(std::span<const Symbol> s, const ReductionConfig& cfg, RuleSink& sink) {
  if (s.empty()) throw PreconditionError("build_offline: empty input");
  if (s.size() == 1) return s[0];
  LevelString level = esp_round(s, cfg, sink);
  while (level.size() > 1) level = esp_round(level, cfg, sink);
  return level[0];
}

}  // namespace espc
