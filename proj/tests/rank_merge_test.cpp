#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mergetree/naive_forest.hpp"
#include "mergetree/rank_merge.hpp"

using namespace mergetree;

namespace {

NodeRef N(std::uint32_t i) { return NodeRef{i}; }

ForestOptions audited() {
  ForestOptions o;
  o.audit = true;
  return o;
}

// Chain with the given labels, first label at the root.
void chain(MergeableForest& f, const std::vector<double>& labels) {
  for (double x : labels) f.insert(x);
  for (std::uint32_t i = 1; i < labels.size(); ++i) f.merge(N(i), N(i - 1));
}

}  // namespace

TEST(RankMerge, SingletonQueries) {
  RankMergeForest f(audited());
  f.insert(3);
  f.insert(4);
  EXPECT_TRUE(f.parent(N(0)).is_null());
  const auto r = f.root_with_steps(N(0));
  EXPECT_EQ(r.node, N(0));
  EXPECT_EQ(r.steps, 0u);
  EXPECT_TRUE(f.nca(N(0), N(1)).is_null());
  EXPECT_EQ(f.rank(N(0)), 0u);
}

TEST(RankMerge, SolidChildIsPathPredecessor) {
  RankMergeForest f(audited());
  chain(f, {1, 2, 3, 4, 5, 6, 7, 8});
  for (std::uint32_t v = 0; v < 8; ++v) {
    const auto c = f.solid_child(N(v));
    if (!c.is_null()) EXPECT_EQ(f.parent(c), N(v));
  }
}

TEST(RankMerge, ChainRootWithinStepCap) {
  RankMergeForest f(audited());
  chain(f, {1, 2, 3, 4, 5, 6, 7, 8});
  const double cap = 2 * std::log2(8.0) + 2;
  for (std::uint32_t v = 0; v < 8; ++v) {
    const auto r = f.root_with_steps(N(v));
    EXPECT_EQ(r.node, N(0));
    EXPECT_LE(r.steps, cap);
    const auto q = f.nca_with_steps(N(v), N(7 - v));
    EXPECT_EQ(q.node, N(std::min(v, 7 - v)));
    EXPECT_LE(q.steps, 2 * cap);
  }
}

TEST(RankMerge, InterleavedChainPartition) {
  // Chains 5->3->1 and 4->2 merge into 5->4->3->2->1; sizes 5,4,3,2,1 from
  // the root down give ranks 2,2,1,1,0, so the solid arcs are 2->1 and 4->3.
  RankMergeForest f(audited());
  for (int i = 0; i < 6; ++i) f.insert(i);
  f.merge(N(5), N(3));
  f.merge(N(3), N(1));
  f.merge(N(4), N(2));
  f.merge(N(5), N(4));
  for (std::uint32_t v = 2; v <= 5; ++v) EXPECT_EQ(f.parent(N(v)), N(v - 1));
  const std::uint32_t ranks[] = {0, 2, 2, 1, 1, 0};
  for (std::uint32_t v = 1; v <= 5; ++v) EXPECT_EQ(f.rank(N(v)), ranks[v]) << v;
  EXPECT_EQ(f.solid_child(N(1)), N(2));
  EXPECT_TRUE(f.solid_child(N(2)).is_null());
  EXPECT_EQ(f.solid_child(N(3)), N(4));
  EXPECT_TRUE(f.solid_child(N(4)).is_null());
  EXPECT_EQ(f.solid_path(N(4)), (std::vector<NodeRef>{N(3), N(4)}));
}

TEST(RankMerge, TopmostSolid) {
  // A chain of seven has sizes 7,6,5,4 at the top, all rank 2, so its solid
  // path is 5,7,9,10.
  RankMergeForest f(audited());
  chain(f, {5, 7, 9, 10, 11, 12, 13});
  ASSERT_EQ(f.solid_path(N(3)).size(), 4u);
  EXPECT_EQ(f.topmost_solid(N(3), Key{6, 0}), N(1));
  EXPECT_EQ(f.topmost_solid(N(3), Key::bottom()), N(0));
  EXPECT_TRUE(f.topmost_solid(N(3), Key{10.5, 0}).is_null());
}

TEST(RankMerge, AncestorMergeIsFree) {
  RankMergeForest f(audited());
  chain(f, {1, 2, 3});
  const auto before = f.counters();
  f.merge(N(2), N(0));
  EXPECT_EQ(f.counters().parent_changes, before.parent_changes);
}

TEST(RankMerge, DeleteLeafAndReinsert) {
  RankMergeForest f(audited());
  chain(f, {1, 2, 3});
  EXPECT_THROW(f.erase(N(1)), PreconditionViolation);
  f.erase(N(2));
  EXPECT_THROW(f.parent(N(2)), InvalidHandle);
  const auto again = f.insert(3);
  EXPECT_EQ(again, N(3));
  f.merge(again, N(1));
  EXPECT_EQ(f.parent(again), N(1));
  EXPECT_EQ(f.root(again), N(0));
}

TEST(RankMerge, RebuildAfterHalvingKeepsAnswers) {
  std::mt19937_64 rng(3);
  RankMergeForest f(audited());
  NaiveForest oracle;
  const std::uint32_t n = 60;
  for (std::uint32_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(rng() % 100);
    f.insert(x);
    oracle.insert(x);
  }
  for (int i = 0; i < 80; ++i) {
    const auto v = N(static_cast<std::uint32_t>(rng() % n)), w = N(static_cast<std::uint32_t>(rng() % n));
    f.merge(v, w);
    oracle.merge(v, w);
  }
  std::uint32_t deleted = 0;
  while (deleted < 3 * n / 4) {
    for (std::uint32_t v = 0; v < n; ++v) {
      if (oracle.is_live(N(v)) && oracle.is_leaf(N(v))) {
        f.erase(N(v));
        oracle.erase(N(v));
        ++deleted;
        break;
      }
    }
  }
  EXPECT_GE(f.rebuild_count(), 1u);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (!oracle.is_live(N(v))) continue;
    EXPECT_EQ(f.parent(N(v)), oracle.parent(N(v)));
    for (std::uint32_t w = 0; w < n; ++w) {
      if (oracle.is_live(N(w))) ASSERT_EQ(f.nca(N(v), N(w)), oracle.nca(N(v), N(w)));
    }
  }
}

TEST(RankMerge, RandomMergesMatchOracle) {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 60; ++round) {
    RankMergeForest f(audited());
    NaiveForest oracle;
    const std::uint32_t n = 2 + static_cast<std::uint32_t>(rng() % 50);
    for (std::uint32_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(rng() % 30);
      f.insert(x);
      oracle.insert(x);
    }
    for (int i = 0; i < 100; ++i) {
      const auto v = N(static_cast<std::uint32_t>(rng() % n)), w = N(static_cast<std::uint32_t>(rng() % n));
      f.merge(v, w);
      oracle.merge(v, w);
      ASSERT_EQ(f.parent_map(), oracle.parent_map());
      ASSERT_EQ(f.root(v), oracle.root(v));
    }
    EXPECT_EQ(f.counters().parent_changes, oracle.counters().parent_changes);
  }
}
