#include "espc/frequent.hpp"

#include <algorithm>
#include <string>

#include "espc/types.hpp"

namespace espc {

std::vector<std::uint32_t> suffix_array(std::string_view s) {
  const std::size_t n = s.size();
  if (n > 0xFFFFFFF0u) throw PreconditionError("suffix_array: input too large");
  std::vector<std::uint32_t> sa(n), rank(n), tmp(n);
  if (n == 0) return sa;

  std::vector<std::uint32_t> bucket(std::max<std::size_t>(256, n) + 1, 0);
  for (std::size_t i = 0; i < n; ++i) rank[i] = static_cast<unsigned char>(s[i]);

  // Stable counting sort of `order` by rank into sa.
  auto sort_by_rank = [&](const std::vector<std::uint32_t>& order, std::size_t classes) {
    std::fill(bucket.begin(), bucket.begin() + classes + 1, 0);
    for (std::uint32_t i : order) ++bucket[rank[i] + 1];
    for (std::size_t c = 1; c <= classes; ++c) bucket[c] += bucket[c - 1];
    for (std::uint32_t i : order) sa[bucket[rank[i]]++] = i;
  };

  std::vector<std::uint32_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);
  sort_by_rank(order, 256);

  // Equivalence classes by the first k characters.
  auto reclassify = [&](std::size_t k) {
    auto second = [&](std::uint32_t i) -> std::int64_t { return i + k < n ? rank[i + k] : -1; };
    tmp[sa[0]] = 0;
    std::uint32_t r = 0;
    for (std::size_t j = 1; j < n; ++j) {
      const std::uint32_t a = sa[j - 1], b = sa[j];
      if (rank[a] != rank[b] || (k > 0 && second(a) != second(b))) ++r;
      tmp[b] = r;
    }
    rank.swap(tmp);
    return static_cast<std::size_t>(r) + 1;
  };

  std::size_t classes = reclassify(0);
  for (std::size_t k = 1; classes < n; k <<= 1) {
    // Radix pass: order by the second key (missing keys first), then a stable
    // sort by the first key.
    std::size_t p = 0;
    for (std::size_t i = n - std::min(n, k); i < n; ++i) order[p++] = static_cast<std::uint32_t>(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (sa[j] >= k) order[p++] = static_cast<std::uint32_t>(sa[j] - k);
    }
    sort_by_rank(order, classes);
    classes = reclassify(k);
  }
  return sa;
}

std::vector<std::uint32_t> lcp_array(std::string_view s, std::span<const std::uint32_t> sa) {
  const std::size_t n = s.size();
  std::vector<std::uint32_t> rank(n), lcp(n, 0);
  for (std::size_t i = 0; i < n; ++i) rank[sa[i]] = static_cast<std::uint32_t>(i);
  std::size_t h = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (rank[i] == 0) {
      h = 0;
      continue;
    }
    const std::size_t j = sa[rank[i] - 1];
    while (i + h < n && j + h < n && s[i + h] == s[j + h]) ++h;
    lcp[rank[i]] = static_cast<std::uint32_t>(h);
    if (h > 0) --h;
  }
  return lcp;
}

FrequentIndex::FrequentIndex(std::string_view s, std::size_t max_bytes) {
  if (s.size() > max_bytes) {
    throw PreconditionError("input of " + std::to_string(s.size()) + " bytes exceeds the oracle bound of " +
                            std::to_string(max_bytes) + " bytes; evaluate a prefix instead");
  }
  sa_ = suffix_array(s);
  lcp_ = lcp_array(s, sa_);
}

std::vector<FrequentIndex::Interval> FrequentIndex::intervals(std::size_t min_len) const {
  std::vector<Interval> out;
  const std::size_t n = sa_.size();
  if (n < 2) return out;
  struct Open {
    std::uint32_t lcp, lb, first;
  };
  constexpr std::uint32_t kInf = 0xFFFFFFFFu;
  std::vector<Open> stack{{0, 0, kInf}};
  for (std::size_t i = 1; i <= n; ++i) {
    const std::uint32_t cur = i < n ? lcp_[i] : 0;
    std::uint32_t first = sa_[i - 1];
    std::uint32_t lb = static_cast<std::uint32_t>(i - 1);
    while (cur < stack.back().lcp) {
      Open e = stack.back();
      stack.pop_back();
      e.first = std::min(e.first, first);
      if (e.lcp >= min_len) out.push_back({e.lcp, e.lb, static_cast<std::uint32_t>(i - 1), e.first});
      first = e.first;
      lb = e.lb;
    }
    if (cur > stack.back().lcp) {
      stack.push_back({cur, lb, first});
    } else {
      stack.back().first = std::min(stack.back().first, first);
    }
  }
  std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) {
    return a.length != b.length ? a.length > b.length : a.first < b.first;
  });
  return out;
}

FrequentPattern FrequentIndex::materialize(const Interval& iv) const {
  FrequentPattern p;
  p.length = iv.length;
  p.occurrences.assign(sa_.begin() + iv.lb, sa_.begin() + iv.rb + 1);
  std::sort(p.occurrences.begin(), p.occurrences.end());
  return p;
}

namespace {

bool pattern_order(const FrequentPattern& a, const FrequentPattern& b) {
  return a.length != b.length ? a.length > b.length : a.first() < b.first();
}

// Row i of the longest-common-extension table, lce(i, j) for all j, is
// derived from row i+1. A substring S[i, i+len) is a right-maximal repeat
// iff some j != i has lce(i, j) == len exactly.
std::vector<FrequentPattern> brute_force_frequent(std::string_view s, std::size_t min_len) {
  const std::size_t n = s.size();
  if (n > kBruteForceMaxBytes) {
    throw PreconditionError("brute-force oracle limited to " + std::to_string(kBruteForceMaxBytes) + " bytes");
  }
  std::vector<FrequentPattern> out;
  std::vector<std::uint32_t> row(n + 1, 0), next(n + 1, 0);
  std::vector<std::uint32_t> lengths;
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = 0; j < n; ++j) row[j] = s[i] == s[j] ? 1 + next[j + 1] : 0;
    row[n] = 0;
    // Only the leftmost occurrence reports a pattern.
    std::uint32_t left_max = 0;
    for (std::size_t j = 0; j < i; ++j) left_max = std::max(left_max, row[j]);
    lengths.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && row[j] >= min_len && row[j] > left_max) lengths.push_back(row[j]);
    }
    std::sort(lengths.begin(), lengths.end());
    lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
    for (std::uint32_t len : lengths) {
      FrequentPattern p;
      p.length = len;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || row[j] >= len) p.occurrences.push_back(j);
      }
      out.push_back(std::move(p));
    }
    std::swap(row, next);
  }
  std::sort(out.begin(), out.end(), pattern_order);
  return out;
}

template <typename Source>
std::vector<FrequentPattern> greedy_select(std::size_t candidates, Source&& candidate, std::size_t k) {
  std::vector<FrequentPattern> kept;
  for (std::size_t c = 0; c < candidates && kept.size() < k; ++c) {
    FrequentPattern q = candidate(c);
    const bool clash = std::any_of(kept.begin(), kept.end(), [&](const FrequentPattern& p) {
      return is_inclusive(p, q) || is_inclusive(q, p);
    });
    if (!clash) kept.push_back(std::move(q));
  }
  return kept;
}

}  // namespace

std::vector<FrequentPattern> exact_frequent(std::string_view s, std::size_t min_len, Oracle oracle) {
  if (min_len == 0) throw PreconditionError("exact_frequent: min_len must be at least 1");
  if (oracle == Oracle::BruteForce) return brute_force_frequent(s, min_len);
  const FrequentIndex index(s);
  std::vector<FrequentPattern> out;
  for (const auto& iv : index.intervals(min_len)) out.push_back(index.materialize(iv));
  return out;
}

bool is_inclusive(const FrequentPattern& p, const FrequentPattern& q) {
  if (q.length > p.length) return false;
  for (std::uint64_t start : q.occurrences) {
    // The rightmost P occurrence starting at or before `start` is the only
    // candidate container since all P intervals have equal length.
    auto it = std::upper_bound(p.occurrences.begin(), p.occurrences.end(), start);
    if (it == p.occurrences.begin()) return false;
    --it;
    if (start + q.length > *it + p.length) return false;
  }
  return true;
}

std::vector<FrequentPattern> top_k_non_inclusive(std::vector<FrequentPattern> patterns, std::size_t k) {
  std::stable_sort(patterns.begin(), patterns.end(), pattern_order);
  return greedy_select(patterns.size(), [&](std::size_t c) { return std::move(patterns[c]); }, k);
}

std::vector<FrequentPattern> top_k_non_inclusive(const FrequentIndex& index, std::size_t min_len, std::size_t k) {
  const auto ivs = index.intervals(min_len);
  return greedy_select(ivs.size(), [&](std::size_t c) { return index.materialize(ivs[c]); }, k);
}

}  // namespace espc
