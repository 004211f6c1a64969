#include "espc/compressor.hpp"

#include <algorithm>
#include <string>

namespace espc {

void compute_labels(QueueEntry& cur, const QueueEntry* prev, const ReductionConfig& cfg) {
  cur.labels.fill(kNoLabel);
  if (prev == nullptr || prev->s == cur.s) return;
  cur.labels[0] = static_cast<std::uint8_t>(reduce_label(prev->s, cur.s));
  for (unsigned k = 1; k < cfg.iterations; ++k) {
    const std::uint8_t a = prev->labels[k - 1];
    const std::uint8_t b = cur.labels[k - 1];
    if (a == kNoLabel || b == kNoLabel) return;
    cur.labels[k] = static_cast<std::uint8_t>(reduce_label(a, b));
  }
}

void LevelQueue::push(const QueueEntry& e) {
  if (size_ == kCapacity) throw std::logic_error("level queue overflow");
  buf_[(head_ + size_) % kCapacity] = e;
  ++size_;
}

void LevelQueue::pop(std::size_t count) {
  if (count > size_) throw std::logic_error("level queue underflow");
  head_ = (head_ + count) % kCapacity;
  size_ -= count;
}

bool is_2tree(std::span<const QueueEntry> q, const ReductionConfig& cfg) {
  const std::size_t u = cfg.window;
  if (q.size() != u || u < 5) throw PreconditionError("is_2tree: window must hold exactly u entries");
  auto at = [&](std::size_t i) -> const QueueEntry& { return q[i]; };
  if (at(u - 4).s == at(u - 3).s && at(u - 3).s != at(u - 2).s) return false;
  if (at(u - 3).s != at(u - 2).s && at(u - 2).s == at(u - 1).s) return false;
  const auto l3 = at(u - 3).final_label(cfg), l2 = at(u - 2).final_label(cfg), l1 = at(u - 1).final_label(cfg);
  if (l3 != kNoLabel && l2 != kNoLabel && l1 != kNoLabel && l3 < l2 && l2 > l1) return false;
  return true;
}

// One parse level. Positions are absolute indices into S_k; the queue holds
// [front_, front_ + size). The segment containing the front is tracked
// incrementally; its end is either exact or a lower bound on what is
// confirmed so far.
class StreamingCompressor::Level {
 public:
  Level(StreamingCompressor& owner, std::size_t depth) : owner_(owner), depth_(depth) {}

  std::uint64_t total() const noexcept { return front_ + queue_.size(); }
  const LevelQueue& queue() const noexcept { return queue_; }

  void push(QueueEntry e) {
    compute_labels(e, has_prev_ ? &prev_ : nullptr, owner_.cfg_);
    prev_ = e;
    has_prev_ = true;
    queue_.push(e);
    owner_.max_queue_ = std::max(owner_.max_queue_, queue_.size());
    drain();
  }

  void close() {
    closed_ = true;
    drain();
    if (!queue_.empty()) throw std::logic_error("level " + std::to_string(depth_) + " not fully parsed at close");
  }

 private:
  enum class Kind { None, Rep, Free2, Free3 };
  enum class Tri { No, Yes, Unknown };
  struct Probe {
    bool known;  // false: position not yet seen
    bool end;    // true: position lies past the end of S_k
    Symbol s;
  };

  std::uint64_t hi() const noexcept { return front_ + queue_.size(); }
  Symbol sym(std::uint64_t p) const noexcept { return queue_[p - front_].s; }
  const QueueEntry& entry(std::uint64_t p) const noexcept {
    return p < front_ ? last_popped_ : queue_[p - front_];
  }
  Probe at(std::uint64_t p) const noexcept {
    if (p < hi()) return {true, false, sym(p)};
    if (closed_) return {true, true, kNoSymbol};
    return {false, false, kNoSymbol};
  }

  void drain() {
    while (!queue_.empty()) {
      const unsigned block = decide();
      if (block == 0) return;
      emit(block);
    }
  }

  void emit(unsigned block) {
    QueueEntry a = queue_[0], b = queue_[1];
    QueueEntry top;
    if (block == 2) {
      top = owner_.update(a, b);
    } else {
      const QueueEntry c = queue_[2];
      const QueueEntry inner = owner_.update(b, c);
      top = owner_.update(a, inner);
    }
    last_popped_ = queue_[block - 1];
    queue_.pop(block);
    front_ += block;
    if (end_exact_ && front_ == seg_end_) kind_ = Kind::None;
    if (kind_ != Kind::None && front_ > seg_end_) throw std::logic_error("block crossed a segment boundary");
    owner_.advance(top, depth_ + 1);
  }

  // Extends the current repetition segment as far as the window allows.
  void probe_rep() {
    if (end_exact_) return;
    std::uint64_t p = scan_;
    while (p < hi() && sym(p) == run_sym_) ++p;
    scan_ = p;
    seg_end_ = p;
    if (p >= hi()) {
      end_exact_ = closed_;
      return;
    }
    // A lone symbol after the run that precedes another repetition (or the
    // end of the level) is absorbed into this segment.
    const Symbol b = sym(p);
    const Probe c = at(p + 1);
    if (!c.known) return;
    if (c.end) {
      seg_end_ = p + 1;
      end_exact_ = true;
      return;
    }
    if (c.s == b) {
      end_exact_ = true;
      return;
    }
    const Probe d = at(p + 2);
    if (!d.known) return;
    end_exact_ = true;
    if (!d.end && d.s == c.s) seg_end_ = p + 1;
  }

  // Extends the current repetition-free run: j belongs to it unless j starts
  // a repetition.
  void probe_free() {
    if (end_exact_) return;
    std::uint64_t j = scan_;
    for (;;) {
      if (j >= hi()) {
        end_exact_ = closed_;
        break;
      }
      const Probe next = at(j + 1);
      if (!next.known) break;
      if (!next.end && next.s == sym(j)) {
        end_exact_ = true;
        break;
      }
      ++j;
    }
    scan_ = j;
    seg_end_ = j;
  }

  bool classify() {
    const std::uint64_t f = front_;
    const Probe next = at(f + 1);
    if (!next.known) return false;
    if (next.end) throw std::logic_error("single trailing symbol at level " + std::to_string(depth_));
    seg_begin_ = f;
    end_exact_ = false;
    if (next.s == sym(f)) {
      start_rep(f, f + 2);
      return true;
    }
    scan_ = f + 1;
    probe_free();
    const std::uint64_t len = seg_end_ - f;
    if (end_exact_ && len == 1) {
      // A lone leading symbol joins the repetition that follows it.
      if (f != 0) throw std::logic_error("unabsorbed single symbol inside level");
      run_sym_ = sym(f + 1);
      end_exact_ = false;
      start_rep(f, f + 3);
      return true;
    }
    if (len >= owner_.cfg_.type2_min_length()) {
      kind_ = Kind::Free2;
      return true;
    }
    if (end_exact_) {
      kind_ = Kind::Free3;
      return true;
    }
    return false;
  }

  void start_rep(std::uint64_t begin, std::uint64_t scan_from) {
    kind_ = Kind::Rep;
    seg_begin_ = begin;
    if (scan_from == begin + 2) run_sym_ = sym(begin);
    scan_ = scan_from;
    seg_end_ = std::min(scan_from, hi());
    end_exact_ = false;
  }

  unsigned left_aligned_step() const {
    const std::uint64_t rem = seg_end_ - front_;
    if (!end_exact_) return rem >= 4 ? 2 : 0;
    if (rem >= 4 || rem == 2) return 2;
    if (rem == 3) return 3;
    throw std::logic_error("left-aligned remainder of " + std::to_string(rem));
  }

  Tri in_segment(std::uint64_t j) const {
    if (j < seg_end_) return Tri::Yes;
    return end_exact_ ? Tri::No : Tri::Unknown;
  }

  Tri landmark(std::uint64_t j) const {
    const ReductionConfig& cfg = owner_.cfg_;
    if (j - seg_begin_ < cfg.iterations + 1) return Tri::No;
    const Tri right = in_segment(j + 1);
    if (right != Tri::Yes) return right;
    const std::uint8_t l = entry(j).final_label(cfg);
    return l > entry(j - 1).final_label(cfg) && l > entry(j + 1).final_label(cfg) ? Tri::Yes : Tri::No;
  }

  unsigned type2_step() const {
    const std::uint64_t f = front_;
    std::uint64_t residual = 0;
    for (; residual < 4; ++residual) {
      const Tri in = in_segment(f + residual);
      if (in == Tri::Unknown) return 0;
      if (in == Tri::No) break;
      const Tri lm = landmark(f + residual);
      if (lm == Tri::Unknown) return 0;
      if (lm == Tri::Yes) break;
    }
    if (residual >= 2) return residual >= 4 ? 2 : static_cast<unsigned>(residual);
    if (residual == 1) throw std::logic_error("type2 residual of length one");
    // Landmark at the front: its bigram absorbs a following lone symbol.
    Tri t = in_segment(f + 2);
    if (t != Tri::Yes) return t == Tri::No ? 2 : 0;
    t = landmark(f + 2);
    if (t != Tri::No) return t == Tri::Yes ? 2 : 0;
    t = in_segment(f + 3);
    if (t != Tri::Yes) return t == Tri::No ? 3 : 0;
    t = landmark(f + 3);
    if (t == Tri::Unknown) return 0;
    return t == Tri::Yes ? 3 : 2;
  }

  // Size of the block at the front, or 0 if more input is needed.
  unsigned decide() {
    if (kind_ == Kind::None && !classify()) return 0;
    switch (kind_) {
      case Kind::Rep:
        probe_rep();
        return left_aligned_step();
      case Kind::Free3:
        return left_aligned_step();
      case Kind::Free2:
        probe_free();
        return type2_step();
      case Kind::None:
        break;
    }
    throw std::logic_error("unclassified segment");
  }

  StreamingCompressor& owner_;
  std::size_t depth_;
  LevelQueue queue_;
  std::uint64_t front_ = 0;
  bool closed_ = false;
  QueueEntry prev_;
  bool has_prev_ = false;
  QueueEntry last_popped_;

  Kind kind_ = Kind::None;
  std::uint64_t seg_begin_ = 0;
  std::uint64_t seg_end_ = 0;
  bool end_exact_ = false;
  std::uint64_t scan_ = 0;
  Symbol run_sym_ = kNoSymbol;
};

StreamingCompressor::StreamingCompressor(std::uint64_t sigma, double alpha, ReductionConfig cfg, CoreCallback on_core)
    : cfg_(cfg), store_(sigma, alpha), on_core_(std::move(on_core)) {
  if (cfg_.iterations == 0 || cfg_.iterations > kMaxReductions) {
    throw PreconditionError("reduction iterations must lie in [1, 5]");
  }
}

StreamingCompressor::~StreamingCompressor() = default;
StreamingCompressor::StreamingCompressor(StreamingCompressor&&) noexcept = default;
StreamingCompressor& StreamingCompressor::operator=(StreamingCompressor&&) noexcept = default;

std::size_t StreamingCompressor::level_count() const noexcept { return levels_.size(); }

StreamingCompressor::Level& StreamingCompressor::level(std::size_t k) {
  while (levels_.size() <= k) levels_.push_back(std::make_unique<Level>(*this, levels_.size()));
  return *levels_[k];
}

void StreamingCompressor::push(Symbol c) {
  if (finalized_) throw PreconditionError("push after finalize");
  if (!store_.is_terminal(c)) {
    throw PreconditionError("push: symbol " + std::to_string(c) + " is not a terminal");
  }
  ++offset_;
  advance(QueueEntry{c, false, {}}, 0);
}

void StreamingCompressor::advance(const QueueEntry& e, std::size_t k) { level(k).push(e); }

void StreamingCompressor::update_leaf(const QueueEntry& x) {
  if (!x.ib) {
    online_leaves_.push_back(x.s);
    online_bits_.push_back(false);
  }
}

void StreamingCompressor::get_afp_node(Symbol variable) {
  if (store_.is_terminal(variable)) throw PreconditionError("get_afp_node: terminal argument");
  const std::uint64_t i = variable - store_.sigma();
  if (fb_[i]) return;
  fb_[i] = true;
  ++cores_;
  if (on_core_) on_core_(CoreEvent{variable, store_.length(variable), offset_});
}

QueueEntry StreamingCompressor::update(const QueueEntry& x, const QueueEntry& y) {
  const InternResult r = store_.intern(x.s, y.s);
  if (r.fresh) {
    update_leaf(x);
    update_leaf(y);
    online_bits_.push_back(true);
    fb_.push_back(false);
    return QueueEntry{r.symbol, true, {}};
  }
  get_afp_node(r.symbol);
  return QueueEntry{r.symbol, false, {}};
}

Symbol StreamingCompressor::finalize() {
  if (finalized_) return root_;
  if (offset_ == 0) throw PreconditionError("finalize: empty input");
  for (std::size_t k = 0;; ++k) {
    Level& lv = level(k);
    if (lv.total() == 1) {
      const QueueEntry& last = lv.queue()[0];
      update_leaf(last);
      online_bits_.push_back(true);  // super root
      root_ = last.s;
      break;
    }
    lv.close();
  }
  finalized_ = true;
  return root_;
}

std::size_t StreamingCompressor::memory_bytes() const noexcept {
  return store_.memory_bytes() + fb_.capacity() / 8 + online_bits_.words().capacity() * 8 +
         online_leaves_.capacity() * sizeof(Symbol) + levels_.size() * sizeof(Level);
}

StreamingCompressor compress_string(std::span<const Symbol> input, std::uint64_t sigma,
                                    StreamingCompressor::CoreCallback on_core) {
  StreamingCompressor c(sigma, 0.8, ReductionConfig{}, std::move(on_core));
  for (Symbol s : input) c.push(s);
  c.finalize();
  return c;
}

bool agrees_with_offline(const StreamingCompressor& c, std::span<const Symbol> input) {
  if (!c.finalized()) throw PreconditionError("agrees_with_offline: compressor not finalized");
  if (input.size() != c.offset()) return false;
  RuleStore replay = c.store();
  const Symbol root = build_offline(input, c.config(), replay);
  return root == c.root() && replay.size() == c.store().size();
}

}  // namespace espc
