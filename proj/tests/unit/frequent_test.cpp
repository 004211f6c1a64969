#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "espc/frequent.hpp"
#include "test_util.hpp"

using namespace espc;

namespace {

const FrequentPattern* find_pattern(const std::vector<FrequentPattern>& v, std::uint64_t len,
                                    std::vector<std::uint64_t> occ) {
  for (const auto& p : v) {
    if (p.length == len && p.occurrences == occ) return &p;
  }
  return nullptr;
}

std::vector<std::uint32_t> naive_suffix_array(const std::string& s) {
  std::vector<std::uint32_t> sa(s.size());
  for (std::size_t i = 0; i < sa.size(); ++i) sa[i] = static_cast<std::uint32_t>(i);
  std::sort(sa.begin(), sa.end(), [&](auto a, auto b) { return s.compare(a, std::string::npos, s, b) < 0; });
  return sa;
}

}  // namespace

TEST(SuffixArray, MatchesNaiveSort) {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 300; ++t) {
    const std::string s = test::random_text(rng, rng() % 300, 1 + rng() % 5);
    ASSERT_EQ(suffix_array(s), naive_suffix_array(s)) << s.size();
  }
  EXPECT_EQ(suffix_array("banana"), (std::vector<std::uint32_t>{5, 3, 1, 0, 4, 2}));
}

TEST(SuffixArray, Lcp) {
  const auto sa = suffix_array("banana");
  EXPECT_EQ(lcp_array("banana", sa), (std::vector<std::uint32_t>{0, 1, 3, 0, 0, 2}));
}

TEST(ExactFrequent, Examples) {
  for (Oracle o : {Oracle::BruteForce, Oracle::SuffixArray}) {
    const auto abab = exact_frequent("abab", 2, o);
    EXPECT_NE(find_pattern(abab, 2, {0, 2}), nullptr);
    const auto aaaa = exact_frequent("aaaa", 3, o);
    ASSERT_EQ(aaaa.size(), 1u);
    EXPECT_EQ(aaaa[0].occurrences, (std::vector<std::uint64_t>{0, 1}));
    EXPECT_TRUE(exact_frequent("abcd", 1, o).empty());
  }
  EXPECT_THROW(exact_frequent("abc", 0), PreconditionError);
}

TEST(ExactFrequent, OraclesAgree) {
  std::mt19937_64 rng(67);
  for (int t = 0; t < 200; ++t) {
    const std::string s = test::random_text(rng, rng() % 600, 1 + rng() % 4);
    const std::size_t min_len = 1 + rng() % 4;
    ASSERT_EQ(exact_frequent(s, min_len, Oracle::BruteForce), exact_frequent(s, min_len, Oracle::SuffixArray));
  }
}

TEST(ExactFrequent, OccurrencesAreAllMatchesAndRightMaximal) {
  std::mt19937_64 rng(71);
  const std::string s = test::random_text(rng, 400, 3);
  for (const FrequentPattern& p : exact_frequent(s, 2)) {
    const std::string text = p.text(s);
    std::vector<std::uint64_t> all;
    for (std::size_t i = 0; i + p.length <= s.size(); ++i) {
      if (s.compare(i, p.length, text) == 0) all.push_back(i);
    }
    ASSERT_EQ(p.occurrences, all);
    ASSERT_GE(p.frequency(), 2u);
    bool extendable = true;
    for (std::uint64_t o : all) extendable = extendable && o + p.length < s.size() && s[o + p.length] == s[all[0] + p.length];
    ASSERT_FALSE(extendable) << text;
  }
}

TEST(ExactFrequent, Bounds) {
  EXPECT_THROW(exact_frequent(std::string(kBruteForceMaxBytes + 1, 'a'), 1, Oracle::BruteForce),
               PreconditionError);
  EXPECT_THROW(FrequentIndex(std::string(100, 'a'), 50), PreconditionError);
}

TEST(Inclusive, Examples) {
  const auto pats = exact_frequent("abaaba", 2, Oracle::BruteForce);
  const FrequentPattern* aba = find_pattern(pats, 3, {0, 3});
  ASSERT_NE(aba, nullptr);
  const FrequentPattern ab{2, {0, 3}};
  EXPECT_TRUE(is_inclusive(*aba, ab));
  EXPECT_FALSE(is_inclusive(ab, *aba));
  EXPECT_TRUE(is_inclusive(*aba, *aba));
  const FrequentPattern outside{2, {0, 2}};
  EXPECT_FALSE(is_inclusive(*aba, outside));
}

TEST(TopK, Selection) {
  const std::string s = "xababyababz";
  const auto all = exact_frequent(s, 2);
  const auto top1 = top_k_non_inclusive(all, 1);
  ASSERT_EQ(top1.size(), 1u);
  EXPECT_EQ(top1[0].text(s), "abab");
  const auto many = top_k_non_inclusive(all, 100);
  for (const auto& p : many) EXPECT_NE(p.text(s), "ab");
  for (std::size_t i = 0; i < many.size(); ++i) {
    for (std::size_t j = 0; j < many.size(); ++j) {
      if (i != j) EXPECT_FALSE(is_inclusive(many[i], many[j]));
    }
  }
  EXPECT_EQ(top_k_non_inclusive(FrequentIndex(s), 2, 100), many);
  EXPECT_LE(many.size(), all.size());
}
