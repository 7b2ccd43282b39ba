#include <gtest/gtest.h>

#include <random>

#include "brute.hpp"
#include "mergetree/dyn_merge.hpp"

using namespace mergetree;

namespace {
NodeRef N(std::uint32_t i) { return NodeRef{i}; }
}  // namespace

TEST(DynMerge, ParentAfterInterleave) {
  // Chains 5->3->1 and 4->2; after merge(5,4), parent(4) = 3.
  DynMergeForest f;
  for (int i = 0; i < 6; ++i) f.insert(i);
  f.merge(N(5), N(3));
  f.merge(N(3), N(1));
  f.merge(N(4), N(2));
  f.merge(N(5), N(4));
  EXPECT_EQ(f.parent(N(4)), N(3));
  EXPECT_EQ(f.counters().shorter_path_nodes, 1u + 1u + 1u + 2u);
}

TEST(DynMerge, AncestorMergeIsFree) {
  DynMergeForest f;
  for (int i = 0; i < 3; ++i) f.insert(i);
  f.merge(N(2), N(1));
  f.merge(N(1), N(0));
  const auto before = f.counters().parent_changes;
  f.merge(N(2), N(0));
  EXPECT_EQ(f.counters().parent_changes, before);
}

TEST(DynMerge, CutAndDelete) {
  DynMergeForest f;
  for (int i = 0; i < 4; ++i) f.insert(i);
  f.merge(N(3), N(2));
  f.merge(N(2), N(1));
  f.cut(N(2));
  EXPECT_EQ(f.root(N(3)), N(2));
  EXPECT_TRUE(f.parent(N(2)).is_null());
  f.cut(N(2));
  EXPECT_THROW(f.erase(N(2)), PreconditionViolation);
  f.erase(N(3));
  f.erase(N(2));
  EXPECT_EQ(f.live_count(), 2u);
}

TEST(DynMerge, MatchesBruteForceWithAudit) {
  std::mt19937_64 rng(5);
  ForestOptions opts;
  opts.audit = true;
  for (int round = 0; round < 100; ++round) {
    DynMergeForest f(opts);
    brute::Forest b;
    const std::uint32_t n = 2 + static_cast<std::uint32_t>(rng() % 30);
    for (std::uint32_t i = 0; i < n; ++i) {
      const double label = static_cast<double>(rng() % 20);
      f.insert(label);
      b.insert(label);
    }
    for (int i = 0; i < 60; ++i) {
      const auto v = static_cast<std::uint32_t>(rng() % n), w = static_cast<std::uint32_t>(rng() % n);
      f.merge(N(v), N(w));
      b.merge(v, w);
      ASSERT_EQ(f.nca(N(v), N(w)).index, b.nca(v, w));
      const auto map = f.parent_map();
      for (std::uint32_t x = 0; x < n; ++x) ASSERT_EQ(map[x].index, b.parent[x]);
    }
  }
}
