#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "mergetree/link_cut.hpp"

using namespace mergetree;
using Index = DynForest::Index;
constexpr Index kNil = DynForest::kNil;

namespace {

DynForest integers(std::uint32_t count) {
  DynForest f;
  for (std::uint32_t i = 0; i < count; ++i) f.add_node(Key{static_cast<double>(i), i});
  return f;
}

// Plain parent-array model for the differential test.
struct Model {
  std::vector<Index> parent;

  std::vector<Index> path(Index v) const {
    std::vector<Index> out;
    for (; v != kNil; v = parent[v]) out.push_back(v);
    return out;
  }
  Index root(Index v) const { return path(v).back(); }
  void evert(Index v) {
    auto p = path(v);
    parent[v] = kNil;
    for (std::size_t i = 1; i < p.size(); ++i) parent[p[i]] = p[i - 1];
  }
  Index nca(Index v, Index w) const {
    const auto pv = path(v);
    const std::set<Index> on(pv.begin(), pv.end());
    for (auto x : path(w)) {
      if (on.count(x)) return x;
    }
    return kNil;
  }
};

}  // namespace

TEST(LinkCut, LinkSetsParent) {
  auto f = integers(2);
  f.link(0, 1);
  EXPECT_EQ(f.parent(0), 1u);
  EXPECT_EQ(f.root(0), 1u);
}

TEST(LinkCut, LongChainRoot) {
  auto f = integers(64);
  for (Index i = 0; i + 1 < 64; ++i) f.link(i, i + 1);
  EXPECT_EQ(f.root(0), 63u);
  EXPECT_EQ(f.depth(0), 63u);
  EXPECT_EQ(f.nca(0, 40), 40u);
}

TEST(LinkCut, LinkRejectsCycleAndNonRoot) {
  auto f = integers(3);
  f.link(0, 1);
  EXPECT_ANY_THROW(f.link(1, 0));
  EXPECT_ANY_THROW(f.link(0, 2));
}

TEST(LinkCut, EvertRootIsInvisible) {
  auto f = integers(3);
  f.link(0, 1);
  f.link(1, 2);
  f.evert(2);
  EXPECT_EQ(f.parent(0), 1u);
  EXPECT_EQ(f.parent(1), 2u);
  EXPECT_EQ(f.root(0), 2u);
}

TEST(LinkCut, EvertReversesPath) {
  auto f = integers(3);
  f.link(0, 1);
  f.link(1, 2);
  f.evert(0);
  EXPECT_EQ(f.root(2), 0u);
  EXPECT_EQ(f.parent(2), 1u);
  EXPECT_EQ(f.parent(1), 0u);
  EXPECT_EQ(f.parent(0), kNil);
}

TEST(LinkCut, PathMinOnHeapOrderedChain) {
  // Chain 5->4->3->2->1 rooted at 1.
  auto f = integers(6);
  for (Index i = 5; i > 1; --i) f.link(i, i - 1);
  EXPECT_EQ(f.pathmin(5), 1u);
  EXPECT_EQ(f.treemin(3), 1u);
  f.cut(3);
  EXPECT_EQ(f.pathmin(5), 3u);
  EXPECT_EQ(f.treemin(2), 1u);
}

TEST(LinkCut, Topmost) {
  // Chain 5->3->1: ancestors above 2 are {5,3}, so the topmost is 3.
  auto f = integers(6);
  f.set_verify_paths(true);
  f.link(5, 3);
  f.link(3, 1);
  EXPECT_EQ(f.topmost(5, Key{2.0, 2}), 3u);
  EXPECT_EQ(f.topmost(5, Key{4.0, 4}), 5u);
  EXPECT_EQ(f.topmost(5, Key::bottom()), 1u);
  EXPECT_EQ(f.topmost(5, Key{0.5, 0}), 1u);
}

TEST(LinkCut, TopmostRejectsUnorderedPath) {
  auto f = integers(3);
  f.set_verify_paths(true);
  f.link(0, 2);
  EXPECT_THROW(f.topmost(0, Key::bottom()), PreconditionViolation);
}

TEST(LinkCut, RandomOpsMatchParentArray) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 40; ++round) {
    const Index n = 2 + static_cast<Index>(rng() % 40);
    DynForest f;
    Model m;
    for (Index i = 0; i < n; ++i) {
      f.add_node(Key{static_cast<double>(rng() % 1000), i});
      m.parent.push_back(kNil);
    }
    for (int step = 0; step < 400; ++step) {
      const Index v = static_cast<Index>(rng() % n), w = static_cast<Index>(rng() % n);
      switch (rng() % 6) {
        case 0:
          if (m.parent[v] == kNil && m.root(w) != v) {
            f.link(v, w);
            m.parent[v] = w;
          }
          break;
        case 1:
          f.cut(v);
          m.parent[v] = kNil;
          break;
        case 2:
          f.evert(v);
          m.evert(v);
          break;
        case 3: {
          ASSERT_EQ(f.root(v), m.root(v));
          ASSERT_EQ(f.parent(v), m.parent[v]);
          ASSERT_EQ(f.depth(v), m.path(v).size() - 1);
          break;
        }
        case 4: {
          ASSERT_EQ(f.nca(v, w), m.nca(v, w));
          const auto p = m.path(v);
          const auto best = *std::min_element(p.begin(), p.end(), [&](Index a, Index b) { return f.key(a) < f.key(b); });
          ASSERT_EQ(f.pathmin(v), best);
          break;
        }
        default: {
          Index best = kNil;
          for (Index x = 0; x < n; ++x) {
            if (m.root(x) == m.root(v) && (best == kNil || f.key(x) < f.key(best))) best = x;
          }
          ASSERT_EQ(f.treemin(v), best);
        }
      }
      f.audit();
    }
    std::vector<Index> parents = f.extract_parents();
    ASSERT_EQ(parents, m.parent);
  }
}
