#include "espc/rank_select.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include "espc/types.hpp"

namespace espc {

namespace {

constexpr std::uint64_t kWordsPerSuper = 8;
constexpr std::uint64_t kSuperBits = 64 * kWordsPerSuper;

}  // namespace

RankSelectBits::RankSelectBits(std::string_view bits) {
  for (char c : bits) {
    if (c != '0' && c != '1') throw PreconditionError("bit string must contain only '0' and '1'");
    push_back(c == '1');
  }
}

void RankSelectBits::push_back(bool bit) {
  if (size_ % 64 == 0) words_.push_back(0);
  if (bit) words_.back() |= std::uint64_t{1} << (size_ % 64);
  ++size_;
  indexed_ = false;
}

bool RankSelectBits::access(std::uint64_t i) const {
  if (i == 0 || i > size_) throw std::out_of_range("access: position " + std::to_string(i) + " out of range");
  const std::uint64_t k = i - 1;
  return (words_[k / 64] >> (k % 64)) & 1U;
}

void RankSelectBits::build_index() const {
  super_.assign(words_.size() / kWordsPerSuper + 2, 0);
  std::uint64_t ones = 0;
  for (std::uint64_t w = 0; w < words_.size(); ++w) {
    if (w % kWordsPerSuper == 0) super_[w / kWordsPerSuper] = ones;
    ones += static_cast<std::uint64_t>(std::popcount(words_[w]));
  }
  super_[words_.size() / kWordsPerSuper + (words_.size() % kWordsPerSuper ? 1 : 0)] = ones;
  indexed_ = true;
}

std::uint64_t RankSelectBits::rank(bool c, std::uint64_t i) const {
  if (i > size_) throw std::out_of_range("rank: position " + std::to_string(i) + " out of range");
  if (!indexed_) build_index();
  const std::uint64_t sb = i / kSuperBits;
  std::uint64_t ones = super_[sb];
  const std::uint64_t full_words = i / 64;
  for (std::uint64_t w = sb * kWordsPerSuper; w < full_words; ++w) {
    ones += static_cast<std::uint64_t>(std::popcount(words_[w]));
  }
  if (i % 64 != 0) {
    const std::uint64_t mask = (std::uint64_t{1} << (i % 64)) - 1;
    ones += static_cast<std::uint64_t>(std::popcount(words_[full_words] & mask));
  }
  return c ? ones : i - ones;
}

std::uint64_t RankSelectBits::select(bool c, std::uint64_t j) const {
  if (j == 0 || j > count(c)) {
    throw std::out_of_range("select: occurrence " + std::to_string(j) + " out of range");
  }
  // Binary search on superblocks, then scan words and bits.
  std::uint64_t lo = 0, hi = (size_ + kSuperBits - 1) / kSuperBits;
  auto before = [&](std::uint64_t sb) {
    const std::uint64_t ones = super_[sb];
    return c ? ones : std::min(sb * kSuperBits, size_) - ones;
  };
  while (hi - lo > 1) {
    const std::uint64_t mid = (lo + hi) / 2;
    if (before(mid) < j) lo = mid; else hi = mid;
  }
  std::uint64_t seen = before(lo);
  for (std::uint64_t w = lo * kWordsPerSuper; w < words_.size(); ++w) {
    std::uint64_t word = c ? words_[w] : ~words_[w];
    const std::uint64_t valid = std::min<std::uint64_t>(64, size_ - w * 64);
    if (valid < 64) word &= (std::uint64_t{1} << valid) - 1;
    const auto pc = static_cast<std::uint64_t>(std::popcount(word));
    if (seen + pc >= j) {
      for (std::uint64_t b = 0;; ++b) {
        if ((word >> b) & 1U) {
          if (++seen == j) return w * 64 + b + 1;
        }
      }
    }
    seen += pc;
  }
  throw std::logic_error("select: index inconsistent");
}

std::string RankSelectBits::to_string() const {
  std::string out;
  out.reserve(size_);
  for (std::uint64_t i = 1; i <= size_; ++i) out.push_back(access(i) ? '1' : '0');
  return out;
}

}  // namespace espc
