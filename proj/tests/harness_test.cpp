#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "json.hpp"
#include "mergetree/fuzz.hpp"
#include "mergetree/naive_forest.hpp"
#include "mergetree/report.hpp"
#include "mergetree/workloads.hpp"

using namespace mergetree;

namespace {

OpCounters measured(const Workload& w, Backend b) { return run_workload(w, b).counters; }

// Wraps the naive forest and returns the larger endpoint whenever the true
// nca is a third node.
class BrokenForest : public MergeableForest {
 public:
  std::string_view name() const noexcept override { return "broken"; }
  Capability capability() const noexcept override { return {true, true}; }

 protected:
  void do_insert(std::uint32_t v) override { inner_.insert(key_at(v).label); }
  void do_merge(std::uint32_t v, std::uint32_t w) override { inner_.merge(NodeRef{v}, NodeRef{w}); }
  std::uint32_t do_root(std::uint32_t v) override { return inner_.root(NodeRef{v}).index; }
  std::uint32_t do_nca(std::uint32_t v, std::uint32_t w) override {
    const auto right = inner_.nca(NodeRef{v}, NodeRef{w}).index;
    if (right != kNil && right != v && right != w) return max_of(v, w);
    return right;
  }
  std::uint32_t do_parent(std::uint32_t v) override { return inner_.parent(NodeRef{v}).index; }
  void do_cut(std::uint32_t v) override { inner_.cut(NodeRef{v}); }
  void do_erase(std::uint32_t v) override { inner_.erase(NodeRef{v}); }

 private:
  NaiveForest inner_;
};

}  // namespace

TEST(Workloads, Fig6SmallestInstance) {
  const auto w = workload_fig6(1);
  EXPECT_EQ(w.setup.size(), 3u + 2u);
  EXPECT_EQ(w.measured, (Trace{Op::merge(2, 1)}));
}

TEST(Workloads, Fig6AllMergesStructural) {
  for (std::uint32_t k : {1u, 3u, 10u}) {
    const auto c = measured(workload_fig6(k), Backend::dyn);
    EXPECT_EQ(c.merges, k * k);
    EXPECT_EQ(c.structural_merges, k * k);
    EXPECT_LE(k * k, (2 * k + 1) * (2 * k) / 2);
  }
}

TEST(Workloads, Fig7ClosedForm) {
  for (std::uint32_t k : {4u, 16u, 100u, 400u}) {
    const double s = std::sqrt(static_cast<double>(k));
    const auto want = static_cast<std::uint64_t>((k * s + k - 2 * s) / 2);
    EXPECT_EQ(measured(workload_fig7(k), Backend::dyn).shorter_path_nodes, want) << k;
    EXPECT_EQ(measured(workload_fig7(k), Backend::naive).shorter_path_nodes, want) << k;
  }
  EXPECT_THROW(workload_fig7(10), std::invalid_argument);
}

TEST(Workloads, InterleaveSmall) {
  const auto two = workload_interleave(2);
  EXPECT_EQ(two.measured.size(), 1u);
  EXPECT_EQ(measured(two, Backend::dyn).parent_changes, 1u);
  EXPECT_EQ(interleave_parent_changes(8), 17u);
  EXPECT_EQ(measured(workload_interleave(8), Backend::dyn).parent_changes, 17u);
  EXPECT_THROW(workload_interleave(12), std::invalid_argument);
}

TEST(Workloads, InterleaveExactSumMatchesSimulation) {
  // The exact sum against a literal simulation on the naive forest.
  for (std::uint32_t n : {4u, 16u, 64u, 256u}) {
    const auto w = workload_interleave(n);
    NaiveForest f;
    for (const auto& op : w.setup) apply(f, op);
    for (const auto& op : w.measured) apply(f, op);
    EXPECT_EQ(f.counters().parent_changes, interleave_parent_changes(n));
    EXPECT_EQ(measured(w, Backend::rank).parent_changes, interleave_parent_changes(n));
    // One path at the end: the labels in order.
    for (std::uint32_t v = 1; v < n; ++v) EXPECT_EQ(f.parent(NodeRef{v}), NodeRef{v - 1});
  }
}

TEST(Workloads, RandomIsSeeded) {
  EXPECT_EQ(workload_random(50, 3).measured, workload_random(50, 3).measured);
  EXPECT_NE(workload_random(50, 3).measured, workload_random(50, 4).measured);
  EXPECT_THROW(make_workload("spiral", 4), std::invalid_argument);
}

TEST(SortViaMerge, Examples) {
  EXPECT_TRUE(sort_via_merge({}).empty());
  const std::vector<double> sorted{1, 2, 3};
  EXPECT_EQ(sort_via_merge(sorted), sorted);
  const std::vector<double> dup{3, 1, 3, 2, 1};
  EXPECT_EQ(sort_via_merge(dup, Backend::dyn), (std::vector<double>{1, 1, 2, 3, 3}));
  EXPECT_THROW(sort_via_merge(dup, Backend::implicit), UnsupportedOperation);
}

TEST(SortViaMerge, MatchesStdSort) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d;
  std::vector<double> v(1000);
  for (auto& x : v) x = d(rng);
  auto want = v;
  std::sort(want.begin(), want.end());
  EXPECT_EQ(sort_via_merge(v), want);
}

TEST(Report, BoundsAndVerdicts) {
  BoundInputs in;
  in.backend = Backend::rank;
  in.n = 8;
  in.m = 2;
  in.total.parent_changes = 40;
  auto checks = check_bounds(in);
  ASSERT_FALSE(checks.empty());
  EXPECT_EQ(checks[0].name, "parent_changes");
  EXPECT_DOUBLE_EQ(checks[0].limit, 4 * 2 * (3 + 2));
  EXPECT_EQ(worst(checks), Verdict::pass);
  in.total.parent_changes = 41;
  EXPECT_EQ(worst(check_bounds(in)), Verdict::fail);
  in.total.parent_changes = 0;
  // Flag above 4n(lg n + 2) = 160, fail above 8n(lg n + 2) = 320.
  in.total.topmost_cost = 160;
  EXPECT_EQ(worst(check_bounds(in)), Verdict::pass);
  in.total.topmost_cost = 161;
  EXPECT_EQ(worst(check_bounds(in)), Verdict::flag);
  in.total.topmost_cost = 321;
  EXPECT_EQ(worst(check_bounds(in)), Verdict::fail);
}

TEST(Report, JsonFieldNames) {
  const auto r = run_workload(workload_interleave(8), Backend::rank);
  const auto j = nlohmann::json::parse(to_json(r));
  for (const char* key : {"workload", "param", "backend", "n", "m", "measured_merges", "seconds", "parent_changes",
                          "merges", "structural_merges", "merge_steps", "topmost_queries", "topmost_cost",
                          "solid_insertions", "solid_deletions", "rank_increases", "shorter_path_nodes",
                          "total_parent_changes", "expected_parent_changes", "checks", "verdict"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["parent_changes"], 17);
  EXPECT_EQ(j["expected_parent_changes"], 17);
  EXPECT_EQ(j["verdict"], "pass");
  EXPECT_EQ(j["n"], 8);
  EXPECT_EQ(j["m"], 7);
}

TEST(Fuzz, EmptyTraceIsEqual) {
  const auto r = replay({}, {Backend::dyn, Backend::rank, Backend::implicit});
  EXPECT_FALSE(r.mismatch);
  EXPECT_EQ(r.m, 0u);
}

TEST(Fuzz, TenThousandOpsNoCuts) {
  FuzzConfig cfg;
  cfg.ops = 10000;
  cfg.seed = 77;
  const auto r = fuzz(cfg);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.result.backends.size(), 3u);
  EXPECT_EQ(r.result.applied.size(), 10000u);
}

TEST(Fuzz, TenThousandOpsWithCuts) {
  FuzzConfig cfg;
  cfg.ops = 10000;
  cfg.seed = 78;
  cfg.cuts = true;
  cfg.backends = {Backend::dyn, Backend::rank};
  const auto r = fuzz(cfg);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.result.backends, (std::vector<Backend>{Backend::dyn}));
  EXPECT_FALSE(r.result.cut_free);
}

TEST(Fuzz, GeneratedTracesAreDeterministicAndValid) {
  FuzzConfig cfg;
  cfg.ops = 3000;
  cfg.seed = 5;
  cfg.cuts = true;
  EXPECT_EQ(generate_trace(cfg), generate_trace(cfg));
  EXPECT_NO_THROW(replay(generate_trace(cfg), {Backend::dyn}));
}

TEST(Fuzz, ShrinksToSmallReproducer) {
  const ForestFactory broken = [](Backend b, const ForestOptions& o) -> std::unique_ptr<MergeableForest> {
    if (b == Backend::dyn) return std::make_unique<BrokenForest>();
    return make_forest(b, o);
  };
  FuzzConfig cfg;
  cfg.ops = 2000;
  cfg.seed = 9;
  const auto trace = generate_trace(cfg);
  const auto first = replay(trace, {Backend::dyn}, {}, false, broken);
  ASSERT_TRUE(first.mismatch);
  EXPECT_EQ(first.mismatch->backend, "dyn");
  const auto small = shrink(trace, {Backend::dyn}, {}, broken);
  // A wrong interior nca needs three nodes, two merges and the query.
  EXPECT_EQ(small.size(), 6u) << [&] { std::stringstream ss; write_trace(ss, small); return ss.str(); }();
  const auto again = replay(small, {Backend::dyn}, {}, false, broken);
  ASSERT_TRUE(again.mismatch);
  EXPECT_EQ(again.mismatch->op_index, small.size() - 1);
  EXPECT_FALSE(replay(small, {Backend::dyn}).mismatch);
}

TEST(Fuzz, LenientReplaySkipsInvalidOps) {
  const Trace t{Op::insert(1), Op::merge(0, 3), Op::insert(2), Op::merge(1, 0), Op::erase(0), Op::root(1)};
  EXPECT_THROW(replay(t, {Backend::rank}), std::invalid_argument);
  const auto r = replay(t, {Backend::rank}, {}, true);
  EXPECT_FALSE(r.mismatch);
  EXPECT_EQ(r.applied, (std::vector<std::size_t>{0, 2, 3, 5}));
}
