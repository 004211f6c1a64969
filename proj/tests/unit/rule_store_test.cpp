#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "espc/rule_store.hpp"
#include "test_util.hpp"

using namespace espc;

TEST(RuleStore, InternDeduplicates) {
  RuleStore store;
  const InternResult a = store.intern('a', 'b');
  const InternResult b = store.intern('a', 'b');
  EXPECT_TRUE(a.fresh);
  EXPECT_FALSE(b.fresh);
  EXPECT_EQ(a.symbol, b.symbol);
  EXPECT_EQ(a.symbol, store.sigma());
  EXPECT_EQ(store.find('a', 'b'), a.symbol);
  EXPECT_EQ(store.find('b', 'a'), kNoSymbol);
}

TEST(RuleStore, LengthsAdd) {
  RuleStore store;
  const Symbol x1 = store.produce('a', 'b');
  const Symbol x2 = store.produce(x1, x1);
  EXPECT_EQ(store.length('a'), 1u);
  EXPECT_EQ(store.length(x1), 2u);
  EXPECT_EQ(store.length(x2), 4u);
  EXPECT_EQ(store.height(x2), 2u);
}

TEST(RuleStore, SequentialIds) {
  RuleStore store(4);
  std::vector<Symbol> ids;
  for (Symbol a = 0; a < 4; ++a)
    for (Symbol b = 0; b < 4; ++b) ids.push_back(store.produce(a, b));
  for (std::size_t i = 0; i < ids.size(); ++i) EXPECT_EQ(ids[i], 4 + i);
}

TEST(RuleStore, RejectsUndefinedChildren) {
  RuleStore store;
  EXPECT_THROW(store.intern(256, 'a'), PreconditionError);
  EXPECT_THROW(store.rule('a'), PreconditionError);
  EXPECT_THROW(store.expand(999), PreconditionError);
}

TEST(RuleStore, RejectsBadLoadFactor) {
  EXPECT_THROW(RuleStore(256, 0.0), PreconditionError);
  EXPECT_THROW(RuleStore(256, 1.0), PreconditionError);
}

TEST(RuleStore, Expand) {
  RuleStore store;
  const Symbol x1 = store.produce('a', 'b');
  const Symbol x2 = store.produce(x1, x1);
  std::ostringstream os;
  store.expand(x2, os);
  EXPECT_EQ(os.str(), "abab");
  EXPECT_EQ(store.expand(x1), test::bytes("ab"));
  EXPECT_EQ(store.expand('a'), test::bytes("a"));
}

TEST(RuleStore, ReverseMapSurvivesGrowth) {
  std::mt19937_64 rng(3);
  RuleStore store(1000, 0.5);
  std::vector<std::pair<Symbol, Symbol>> pairs;
  for (int i = 0; i < 20000; ++i) {
    const Symbol hi = store.symbol_count();
    pairs.emplace_back(rng() % hi, rng() % hi);
    store.produce(pairs.back().first, pairs.back().second);
  }
  for (Symbol x = store.sigma(); x < store.symbol_count(); ++x) {
    const Rule& r = store.rule(x);
    EXPECT_EQ(store.find(r.left, r.right), x);
    EXPECT_LT(r.left, x);
    EXPECT_LT(r.right, x);
    EXPECT_EQ(store.length(x), store.length(r.left) + store.length(r.right));
  }
}
