#pragma once

// Exact frequent-substring oracle: suffix array + LCP intervals, with a
// quadratic longest-common-extension enumeration as an independent check.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace espc {

inline constexpr std::size_t kOracleMaxBytes = std::size_t{16} << 20;
inline constexpr std::size_t kBruteForceMaxBytes = 4096;

// A right-maximal substring occurring at least twice.
struct FrequentPattern {
  std::uint64_t length = 0;
  std::vector<std::uint64_t> occurrences;  // sorted, 0-based starts

  std::uint64_t frequency() const noexcept { return occurrences.size(); }
  std::uint64_t first() const noexcept { return occurrences.front(); }
  std::string text(std::string_view s) const { return std::string(s.substr(first(), length)); }

  friend bool operator==(const FrequentPattern&, const FrequentPattern&) = default;
};

enum class Oracle { BruteForce, SuffixArray };

std::vector<std::uint32_t> suffix_array(std::string_view s);
// lcp[i] = LCP(suffix sa[i-1], suffix sa[i]); lcp[0] = 0.
std::vector<std::uint32_t> lcp_array(std::string_view s, std::span<const std::uint32_t> sa);

// LCP-interval view of the right-maximal repeats of one string.
class FrequentIndex {
 public:
  struct Interval {
    std::uint32_t length;
    std::uint32_t lb, rb;   // inclusive range in the suffix array
    std::uint32_t first;    // leftmost occurrence
  };

  explicit FrequentIndex(std::string_view s, std::size_t max_bytes = kOracleMaxBytes);

  // Intervals with length >= min_len, ordered by length descending then by
  // leftmost occurrence.
  std::vector<Interval> intervals(std::size_t min_len) const;
  FrequentPattern materialize(const Interval& iv) const;

 private:
  std::vector<std::uint32_t> sa_;
  std::vector<std::uint32_t> lcp_;
};

// All right-maximal frequent substrings of length >= min_len, ordered by
// length descending then by first occurrence.
std::vector<FrequentPattern> exact_frequent(std::string_view s, std::size_t min_len,
                                            Oracle oracle = Oracle::SuffixArray);

// P is inclusive of Q iff every occurrence interval of Q lies inside some
// occurrence interval of P.
bool is_inclusive(const FrequentPattern& p, const FrequentPattern& q);

// Longest-first greedy selection of at most k pairwise non-inclusive
// patterns. Input need not be sorted.
std::vector<FrequentPattern> top_k_non_inclusive(std::vector<FrequentPattern> patterns, std::size_t k);
// Same selection, materializing candidates from the index lazily.
std::vector<FrequentPattern> top_k_non_inclusive(const FrequentIndex& index, std::size_t min_len, std::size_t k);

}  // namespace espc
