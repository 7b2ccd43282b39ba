#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "brute.hpp"
#include "mergetree/forest.hpp"
#include "mergetree/naive_forest.hpp"
#include "mergetree/trace.hpp"

using namespace mergetree;

namespace {

NodeRef N(std::uint32_t i) { return NodeRef{i}; }

// Inserts labels 0..count-1 so that handle i has key i.
std::unique_ptr<MergeableForest> integers(Backend b, std::uint32_t count) {
  auto f = make_forest(b);
  for (std::uint32_t i = 0; i < count; ++i) f->insert(i);
  return f;
}

class AllBackends : public ::testing::TestWithParam<Backend> {};

}  // namespace

TEST(Key, OrdersByLabelThenId) {
  EXPECT_LT((Key{1.0, 5}), (Key{2.0, 0}));
  EXPECT_LT((Key{1.0, 0}), (Key{1.0, 1}));
  EXPECT_EQ((Key{1.0, 3}), (Key{1.0, 3}));
  EXPECT_LT(Key::bottom(), (Key{-1e300, 0}));
  EXPECT_FALSE(Key::bottom() < Key::bottom());
}

TEST(Backend, ParsesNames) {
  for (auto b : {Backend::naive, Backend::dyn, Backend::rank, Backend::implicit}) {
    EXPECT_EQ(parse_backend(to_string(b)), b);
  }
  EXPECT_FALSE(parse_backend("splay").has_value());
}

TEST(Backend, Capabilities) {
  EXPECT_TRUE(make_forest(Backend::naive)->capability().supports_cut);
  EXPECT_TRUE(make_forest(Backend::dyn)->capability().supports_parent);
  EXPECT_FALSE(make_forest(Backend::rank)->capability().supports_cut);
  EXPECT_TRUE(make_forest(Backend::rank)->capability().supports_parent);
  const auto c = make_forest(Backend::implicit)->capability();
  EXPECT_FALSE(c.supports_cut || c.supports_parent);
}

TEST_P(AllBackends, InsertMakesSingletonRoot) {
  auto f = make_forest(GetParam());
  const auto x = f->insert(5.0);
  EXPECT_EQ(f->root(x), x);
  if (f->capability().supports_parent) EXPECT_TRUE(f->parent(x).is_null());
}

TEST_P(AllBackends, EqualLabelsGetDistinctOrderedKeys) {
  auto f = make_forest(GetParam());
  const auto a = f->insert(1.0);
  const auto b = f->insert(1.0);
  EXPECT_NE(a, b);
  EXPECT_LT(f->key(a), f->key(b));
  f->merge(a, b);
  EXPECT_EQ(f->root(b), a);
}

TEST_P(AllBackends, InsertsAreNotCounted) {
  auto f = integers(GetParam(), 1000);
  EXPECT_EQ(f->counters(), OpCounters{});
  EXPECT_EQ(f->live_count(), 1000u);
  for (std::uint32_t i = 0; i < 1000; i += 97) EXPECT_EQ(f->root(N(i)), N(i));
}

TEST_P(AllBackends, SelfMergeIsNoop) {
  auto f = integers(GetParam(), 3);
  f->merge(N(2), N(1));
  const auto before = f->counters().parent_changes;
  f->merge(N(2), N(2));
  EXPECT_EQ(f->counters().parent_changes, before);
  EXPECT_EQ(f->root(N(2)), N(1));
}

TEST_P(AllBackends, InterleavesTwoChains) {
  // Arcs 3->1, 5->3 and 4->2; merge(5,4) gives the chain 5->4->3->2->1.
  auto f = integers(GetParam(), 6);
  f->merge(N(3), N(1));
  f->merge(N(5), N(3));
  f->merge(N(4), N(2));
  f->merge(N(5), N(4));
  if (f->capability().supports_parent) {
    EXPECT_EQ(f->parent(N(5)), N(4));
    EXPECT_EQ(f->parent(N(4)), N(3));
    EXPECT_EQ(f->parent(N(3)), N(2));
    EXPECT_EQ(f->parent(N(2)), N(1));
    EXPECT_TRUE(f->parent(N(1)).is_null());
  }
  for (std::uint32_t v = 1; v <= 5; ++v) EXPECT_EQ(f->root(N(v)), N(1));
  EXPECT_EQ(f->nca(N(5), N(4)), N(4));
  EXPECT_EQ(f->nca(N(2), N(5)), N(2));
  EXPECT_EQ(f->nca(N(3), N(3)), N(3));
  EXPECT_TRUE(f->nca(N(0), N(5)).is_null());
}

TEST_P(AllBackends, MergeWithAncestorChangesNothing) {
  auto f = integers(GetParam(), 4);
  f->merge(N(3), N(2));
  f->merge(N(2), N(1));
  const auto before = f->counters();
  f->merge(N(3), N(1));
  EXPECT_EQ(f->counters().parent_changes, before.parent_changes);
  EXPECT_EQ(f->counters().structural_merges, before.structural_merges);
  EXPECT_EQ(f->counters().merges, before.merges + 1);
}

TEST_P(AllBackends, DeletedHandleIsInvalid) {
  auto f = integers(GetParam(), 3);
  f->merge(N(2), N(1));
  f->erase(N(2));
  EXPECT_FALSE(f->is_live(N(2)));
  EXPECT_THROW(f->root(N(2)), InvalidHandle);
  EXPECT_THROW(f->merge(N(2), N(0)), InvalidHandle);
  EXPECT_THROW(f->root(N(7)), InvalidHandle);
  const auto again = f->insert(2.0);
  EXPECT_EQ(again, N(3));
  EXPECT_EQ(f->root(N(1)), N(1));
}

TEST_P(AllBackends, UnsupportedOperationsThrow) {
  auto f = integers(GetParam(), 2);
  if (!f->capability().supports_parent) EXPECT_THROW(f->parent(N(0)), UnsupportedOperation);
  if (!f->capability().supports_cut) EXPECT_THROW(f->cut(N(0)), UnsupportedOperation);
}

INSTANTIATE_TEST_SUITE_P(Backends, AllBackends,
                         ::testing::Values(Backend::naive, Backend::dyn, Backend::rank, Backend::implicit),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Naive, CutOnRootIsNoop) {
  NaiveForest f;
  f.insert(1);
  f.cut(N(0));
  EXPECT_EQ(f.counters().parent_changes, 0u);
}

TEST(Naive, CutSplitsChain) {
  NaiveForest f;
  for (int i = 0; i < 6; ++i) f.insert(i);
  f.merge(N(5), N(4));
  f.merge(N(4), N(3));
  f.cut(N(4));
  EXPECT_EQ(f.root(N(5)), N(4));
  EXPECT_EQ(f.root(N(3)), N(3));
  EXPECT_TRUE(f.nca(N(5), N(3)).is_null());
}

TEST(Naive, DeleteRequiresLeaf) {
  NaiveForest f;
  for (int i = 0; i < 3; ++i) f.insert(i);
  f.merge(N(2), N(1));
  EXPECT_THROW(f.erase(N(1)), PreconditionViolation);
  f.erase(N(2));
  f.erase(N(1));
  EXPECT_EQ(f.live_count(), 1u);
}

TEST(Naive, MatchesBruteForceSortAndRelink) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 300; ++round) {
    NaiveForest f;
    brute::Forest b;
    for (int i = 0; i < 8; ++i) {
      const double label = static_cast<double>(rng() % 5);
      f.insert(label);
      b.insert(label);
    }
    for (int i = 0; i < 10; ++i) {
      const auto v = static_cast<std::uint32_t>(rng() % 8), w = static_cast<std::uint32_t>(rng() % 8);
      f.merge(N(v), N(w));
      b.merge(v, w);
      const auto map = f.parent_map();
      for (std::uint32_t x = 0; x < 8; ++x) ASSERT_EQ(map[x].index, b.parent[x]);
    }
  }
}

TEST(Naive, CountsDistinctMovedNodes) {
  // Chains 1->0 and 3->2, then merge(1,3) interleaves them by label.
  NaiveForest f;
  for (double x : {0.0, 1.0, 0.5, 1.5}) f.insert(x);
  f.merge(N(1), N(0));
  f.merge(N(3), N(2));
  f.merge(N(1), N(3));
  // Sorted path: 0(0) 2(0.5) 1(1) 3(1.5); nodes 2, 1 and 3 change parent.
  EXPECT_EQ(f.counters().parent_changes, 2u + 3u);
  EXPECT_EQ(f.parent(N(3)).index, 1u);
}

TEST(Trace, RoundTripsEveryOp) {
  const Trace t{Op::insert(1.5), Op::insert(-2), Op::merge(0, 1), Op::cut(0), Op::erase(1),
                Op::root(0),     Op::nca(0, 1), Op::parent(0)};
  std::stringstream ss;
  write_trace(ss, t);
  EXPECT_EQ(read_trace(ss), t);
}

TEST(Trace, ParsesCommentsAndRejectsGarbage) {
  EXPECT_FALSE(parse_op("# hi").has_value());
  EXPECT_FALSE(parse_op("   ").has_value());
  EXPECT_EQ(parse_op("q nca 3 4"), Op::nca(3, 4));
  EXPECT_THROW(parse_op("m 1", 3), TraceParseError);
  EXPECT_THROW(parse_op("q depth 1"), TraceParseError);
  EXPECT_THROW(parse_op("i abc"), TraceParseError);
  try {
    std::stringstream ss("i 1\nx\n");
    read_trace(ss);
    FAIL();
  } catch (const TraceParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Trace, RunPrintsOneAnswerPerQuery) {
  auto f = make_forest(Backend::dyn);
  std::stringstream out;
  run_trace(*f, {Op::insert(1), Op::insert(2), Op::root(1), Op::merge(1, 0), Op::parent(1), Op::nca(0, 1)}, out);
  EXPECT_EQ(out.str(), "= 1\n= 0\n= 0\n");
}
