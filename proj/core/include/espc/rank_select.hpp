#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace espc {

// Append-only bit sequence with rank/select support. Positions are 1-based:
// rank(c, i) counts c in bits[1..i], select(c, j) is the position of the
// j-th c, access(i) returns bits[i]. The rank index is rebuilt lazily after
// appends.
class RankSelectBits {
 public:
  RankSelectBits() = default;
  // From a string of '0'/'1' characters.
  explicit RankSelectBits(std::string_view bits);

  void push_back(bool bit);
  std::uint64_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool access(std::uint64_t i) const;
  std::uint64_t rank(bool c, std::uint64_t i) const;
  std::uint64_t select(bool c, std::uint64_t j) const;
  std::uint64_t count(bool c) const { return rank(c, size_); }

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }
  std::string to_string() const;

  friend bool operator==(const RankSelectBits& a, const RankSelectBits& b) noexcept {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }

 private:
  void build_index() const;

  std::vector<std::uint64_t> words_;
  std::uint64_t size_ = 0;
  // Ones before each 512-bit superblock.
  mutable std::vector<std::uint64_t> super_;
  mutable bool indexed_ = false;
};

}  // namespace espc
