#include "mergetree/fuzz.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "mergetree/dyn_merge.hpp"
#include "mergetree/naive_forest.hpp"
#include "mergetree/rank_merge.hpp"

namespace mergetree {

namespace {

std::optional<std::vector<NodeRef>> parent_map_of(const MergeableForest& f) {
  if (const auto* d = dynamic_cast<const DynMergeForest*>(&f)) return d->parent_map();
  if (const auto* r = dynamic_cast<const RankMergeForest*>(&f)) return r->parent_map();
  if (const auto* n = dynamic_cast<const NaiveForest*>(&f)) return n->parent_map();
  return std::nullopt;
}

bool needs_parent(const Op& op) { return op.kind == OpKind::parent; }

/// Why op cannot be applied to the oracle's current forest, or empty.
std::string invalid_reason(const NaiveForest& oracle, const Op& op) {
  const auto ok = [&](std::uint32_t v) { return v < oracle.handle_count() && oracle.is_live(NodeRef{v}); };
  switch (op.kind) {
    case OpKind::insert:
      return {};
    case OpKind::merge:
    case OpKind::nca:
      if (!ok(op.a) || !ok(op.b)) return "dead or unknown handle";
      return {};
    case OpKind::erase:
      if (!ok(op.a)) return "dead or unknown handle";
      if (!oracle.is_leaf(NodeRef{op.a})) return "delete of a non-leaf";
      return {};
    default:
      if (!ok(op.a)) return "dead or unknown handle";
      return {};
  }
}

std::vector<Backend> usable(const std::vector<Backend>& backends, bool cuts) {
  std::vector<Backend> out;
  for (auto b : backends) {
    if (b == Backend::naive) continue;
    if (cuts && !make_forest(b)->capability().supports_cut) continue;
    out.push_back(b);
  }
  return out;
}

bool has_cut(const Trace& t) {
  return std::any_of(t.begin(), t.end(), [](const Op& op) { return op.kind == OpKind::cut; });
}

// Drops inserts whose handle no later op mentions, renumbering the rest.
// Relative insertion order, and so key order, is unchanged.
Trace compact_handles(const Trace& t) {
  std::vector<bool> used;
  for (const auto& op : t) {
    if (op.kind == OpKind::insert) {
      used.push_back(false);
      continue;
    }
    for (auto h : {op.a, op.b}) {
      if (h < used.size()) used[h] = true;
    }
  }
  std::vector<std::uint32_t> remap(used.size(), NodeRef::kNullIndex);
  std::uint32_t next = 0;
  for (std::size_t h = 0; h < used.size(); ++h) {
    if (used[h]) remap[h] = next++;
  }
  Trace out;
  std::uint32_t handle = 0;
  for (auto op : t) {
    if (op.kind == OpKind::insert) {
      if (used[handle++]) out.push_back(op);
      continue;
    }
    if (op.a < remap.size()) op.a = remap[op.a];
    if (op.b < remap.size()) op.b = remap[op.b];
    out.push_back(op);
  }
  return out;
}

}  // namespace

Trace generate_trace(const FuzzConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  const auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  NaiveForest oracle;
  std::vector<std::uint32_t> live;
  std::uint32_t merges = 0;
  Trace t;
  t.reserve(cfg.ops);
  while (t.size() < cfg.ops) {
    const auto roll = pick(100);
    Op op;
    if (live.size() < 2 || (roll < 20 && live.size() < cfg.max_live)) {
      op = Op::insert(static_cast<double>(pick(64)));
    } else if (roll < 55 && merges < cfg.max_merges) {
      if (cfg.leaf_merges) {
        std::vector<std::uint32_t> leaves;
        for (auto v : live) {
          if (oracle.is_leaf(NodeRef{v})) leaves.push_back(v);
        }
        op = Op::merge(leaves[pick(leaves.size())], leaves[pick(leaves.size())]);
      } else {
        op = Op::merge(live[pick(live.size())], live[pick(live.size())]);
      }
      ++merges;
    } else if (roll < 65) {
      op = Op::root(live[pick(live.size())]);
    } else if (roll < 78) {
      op = Op::nca(live[pick(live.size())], live[pick(live.size())]);
    } else if (roll < 86) {
      op = Op::parent(live[pick(live.size())]);
    } else if (roll < 93 && cfg.cuts) {
      op = Op::cut(live[pick(live.size())]);
    } else if (cfg.deletes) {
      std::vector<std::uint32_t> leaves;
      for (auto v : live) {
        if (oracle.is_leaf(NodeRef{v})) leaves.push_back(v);
      }
      op = Op::erase(leaves[pick(leaves.size())]);
      live.erase(std::find(live.begin(), live.end(), op.a));
    } else {
      op = Op::root(live[pick(live.size())]);
    }
    const auto r = apply(oracle, op);
    if (op.kind == OpKind::insert) live.push_back(r ? r->index : static_cast<std::uint32_t>(oracle.handle_count() - 1));
    t.push_back(op);
  }
  return t;
}

ReplayResult replay(const Trace& trace, const std::vector<Backend>& backends, const ForestOptions& opts,
                    bool lenient, const ForestFactory& factory) {
  ReplayResult res;
  res.backends = usable(backends, has_cut(trace));
  NaiveForest oracle;
  std::vector<std::unique_ptr<MergeableForest>> forests;
  for (auto b : res.backends) forests.push_back(factory ? factory(b, opts) : make_forest(b, opts));

  for (std::size_t i = 0; i < trace.size() && !res.mismatch; ++i) {
    const auto& op = trace[i];
    if (const auto why = invalid_reason(oracle, op); !why.empty()) {
      if (lenient) continue;
      throw std::invalid_argument("op " + std::to_string(i) + " (" + format_op(op) + "): " + why);
    }
    if (op.kind == OpKind::merge) {
      ++res.m;
      if (!oracle.is_leaf(NodeRef{op.a}) || !oracle.is_leaf(NodeRef{op.b})) res.leaf_only = false;
    }
    if (op.kind == OpKind::cut) res.cut_free = false;
    if (op.is_query()) ++res.queries;
    res.applied.push_back(i);
    const auto expect = apply(oracle, op);
    const bool structural = op.kind == OpKind::merge || op.kind == OpKind::cut || op.kind == OpKind::erase;
    const auto expect_map = structural ? std::optional(oracle.parent_map()) : std::nullopt;

    for (std::size_t k = 0; k < forests.size() && !res.mismatch; ++k) {
      auto& f = *forests[k];
      if (needs_parent(op) && !f.capability().supports_parent) continue;
      const auto fail = [&](std::string detail) {
        res.mismatch = Mismatch{i, std::string(to_string(res.backends[k])), format_op(op) + ": " + std::move(detail)};
      };
      try {
        const auto got = apply(f, op);
        if (op.is_query() && got != expect) {
          fail("expected " + to_string(*expect) + ", got " + to_string(*got));
          continue;
        }
        if (!expect_map) continue;
        const auto map = parent_map_of(f);
        if (!map) continue;
        for (std::size_t v = 0; v < map->size(); ++v) {
          if (!oracle.is_live(NodeRef{static_cast<std::uint32_t>(v)})) continue;
          if ((*map)[v] != (*expect_map)[v]) {
            fail("parent of " + std::to_string(v) + " is " + to_string((*map)[v]) + ", expected " +
                 to_string((*expect_map)[v]));
            break;
          }
        }
      } catch (const std::exception& e) {
        fail(std::string("exception: ") + e.what());
      }
    }
  }
  res.oracle = oracle.counters();
  res.n = oracle.participants();
  for (const auto& f : forests) res.counters.push_back(f->counters());
  return res;
}

Trace shrink(const Trace& trace, const std::vector<Backend>& backends, const ForestOptions& opts,
             const ForestFactory& factory) {
  const auto failing = [&](const Trace& t) -> std::optional<ReplayResult> {
    auto r = replay(t, backends, opts, true, factory);
    if (r.mismatch) return r;
    return std::nullopt;
  };
  auto first = failing(trace);
  if (!first) return trace;
  // Keep only applied ops up to the mismatch; the result is a valid trace.
  const auto normalize = [&](const Trace& t, const ReplayResult& r) {
    Trace out;
    for (auto i : r.applied) out.push_back(t[i]);
    return out;
  };
  Trace cur = normalize(trace, *first);
  for (std::size_t chunk = std::max<std::size_t>(cur.size() / 2, 1); chunk >= 1; chunk /= 2) {
    bool progress = true;
    while (progress) {
      progress = false;
      for (std::size_t at = 0; at < cur.size(); at += chunk) {
        Trace cand;
        cand.reserve(cur.size());
        cand.insert(cand.end(), cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(at));
        cand.insert(cand.end(), cur.begin() + static_cast<std::ptrdiff_t>(std::min(at + chunk, cur.size())), cur.end());
        if (auto r = failing(cand)) {
          cur = normalize(cand, *r);
          progress = true;
          break;
        }
      }
    }
    if (chunk == 1) break;
  }
  if (auto compact = compact_handles(cur); compact.size() < cur.size() && failing(compact)) cur = std::move(compact);
  return cur;
}

std::vector<BoundCheck> trace_bounds(Backend b, const OpCounters& total, const ReplayResult& r) {
  BoundInputs in;
  in.backend = b;
  in.total = total;
  in.n = r.n;
  in.m = r.m;
  in.cut_free = r.cut_free;
  if (r.leaf_only) {
    in.leaf_phase = total;
    in.leaf_merges = r.m;
  }
  return check_bounds(in);
}

bool FuzzResult::ok() const {
  if (result.mismatch) return false;
  for (const auto& [b, cs] : checks) {
    if (worst(cs) == Verdict::fail) return false;
  }
  return true;
}

FuzzResult fuzz(const FuzzConfig& cfg) {
  FuzzResult out;
  out.trace = generate_trace(cfg);
  out.result = replay(out.trace, cfg.backends, cfg.forest);
  if (out.result.mismatch) {
    out.reproducer = shrink(out.trace, cfg.backends, cfg.forest);
    return out;
  }
  out.checks.emplace_back(Backend::naive, trace_bounds(Backend::naive, out.result.oracle, out.result));
  for (std::size_t k = 0; k < out.result.backends.size(); ++k) {
    const auto b = out.result.backends[k];
    out.checks.emplace_back(b, trace_bounds(b, out.result.counters[k], out.result));
  }
  return out;
}

}  // namespace mergetree
