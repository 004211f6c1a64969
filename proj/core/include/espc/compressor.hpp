#pragma once

// Online ESP grammar compression with approximate frequent pattern output.
//
// Each level k of the parse keeps a short FIFO window of S_k. A block (2-tree
// or 2-2-tree) at the front of the window is resolved as soon as enough right
// context has arrived to decide it exactly as the offline parser would; the
// produced variable is pushed to level k+1. The first time a pair is produced
// a second time, the variable is reported as a core.

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "espc/esp.hpp"
#include "espc/rank_select.hpp"
#include "espc/rule_store.hpp"
#include "espc/types.hpp"

namespace espc {

inline constexpr unsigned kMaxReductions = 5;  // lg* of any 64-bit universe
inline constexpr std::uint8_t kNoLabel = 0xFF;

struct QueueEntry {
  Symbol s = kNoSymbol;
  // 1 iff s was created by the Update that produced this entry.
  bool ib = false;
  // labels[k]: label after k+1 alphabet reductions in the current left
  // context, kNoLabel where the left context is a repetition or missing.
  std::array<std::uint8_t, kMaxReductions> labels{kNoLabel, kNoLabel, kNoLabel, kNoLabel, kNoLabel};

  std::uint8_t final_label(const ReductionConfig& cfg) const { return labels[cfg.iterations - 1]; }
};

// Labels of `cur` computed from its left neighbour `prev` (nullptr if none).
void compute_labels(QueueEntry& cur, const QueueEntry* prev, const ReductionConfig& cfg);

// Fixed-capacity FIFO ring of one parse level.
class LevelQueue {
 public:
  static constexpr std::size_t kCapacity = 32;

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  void push(const QueueEntry& e);
  void pop(std::size_t count);
  // i-th entry from the front.
  const QueueEntry& operator[](std::size_t i) const noexcept { return buf_[(head_ + i) % kCapacity]; }

 private:
  std::array<QueueEntry, kCapacity> buf_{};
  std::size_t head_ = 0;
  std::size_t size_ = 0;
};

// The three front-window tests of the reference pseudo-code over a window of
// exactly u entries q[0..u-1]: a repetition ending right before the inspected
// pair, a repetition starting inside it, or a landmark at q[u-2].
// Returns false when a 2-2-tree is called for.
bool is_2tree(std::span<const QueueEntry> window, const ReductionConfig& cfg);

struct CoreEvent {
  Symbol variable;
  std::uint64_t val_length;
  std::uint64_t detection_offset;

  friend bool operator==(const CoreEvent&, const CoreEvent&) = default;
};

class StreamingCompressor {
 public:
  using CoreCallback = std::function<void(const CoreEvent&)>;

  explicit StreamingCompressor(std::uint64_t sigma = kByteAlphabet, double alpha = 0.8, ReductionConfig cfg = {},
                               CoreCallback on_core = {});
  ~StreamingCompressor();
  StreamingCompressor(StreamingCompressor&&) noexcept;
  StreamingCompressor& operator=(StreamingCompressor&&) noexcept;

  void push(Symbol c);
  void push(std::span<const unsigned char> bytes) {
    for (unsigned char b : bytes) push(b);
  }
  // Flushes every level bottom-up and returns the root. Throws
  // PreconditionError if nothing was pushed.
  Symbol finalize();

  bool finalized() const noexcept { return finalized_; }
  Symbol root() const noexcept { return root_; }
  std::uint64_t offset() const noexcept { return offset_; }
  const ReductionConfig& config() const noexcept { return cfg_; }
  const RuleStore& store() const noexcept { return store_; }
  RuleStore release_store() && { return std::move(store_); }

  // FB[i] = 1 iff variable sigma+i has been produced at least twice.
  const std::vector<bool>& frequency_bits() const noexcept { return fb_; }
  std::uint64_t core_count() const noexcept { return cores_; }
  // Skeleton B and leaf sequence L appended by Update/UpdateLeaf in creation
  // order (the file format is produced by to_poslp instead).
  const RankSelectBits& online_bits() const noexcept { return online_bits_; }
  const std::vector<Symbol>& online_leaves() const noexcept { return online_leaves_; }

  std::size_t level_count() const noexcept;
  std::size_t max_queue_occupancy() const noexcept { return max_queue_; }
  std::size_t memory_bytes() const noexcept;

 private:
  class Level;
  friend class Level;

  QueueEntry update(const QueueEntry& x, const QueueEntry& y);
  void update_leaf(const QueueEntry& x);
  void get_afp_node(Symbol variable);
  void advance(const QueueEntry& e, std::size_t level);
  Level& level(std::size_t k);

  ReductionConfig cfg_;
  RuleStore store_;
  CoreCallback on_core_;
  std::deque<std::unique_ptr<Level>> levels_;
  std::vector<bool> fb_;
  RankSelectBits online_bits_;
  std::vector<Symbol> online_leaves_;
  std::uint64_t offset_ = 0;
  std::uint64_t cores_ = 0;
  std::size_t max_queue_ = 0;
  Symbol root_ = kNoSymbol;
  bool finalized_ = false;
};

// Convenience: streams `input` through a compressor and finalizes it.
StreamingCompressor compress_string(std::span<const Symbol> input, std::uint64_t sigma = kByteAlphabet,
                                    StreamingCompressor::CoreCallback on_core = {});

// Replays the offline parser over a copy of the finalized grammar. Alphabet
// reduction reads variable ids, so agreement means the offline parse creates
// no new rule and ends at the same root: both trees are identical.
bool agrees_with_offline(const StreamingCompressor& c, std::span<const Symbol> input);

}  // namespace espc
