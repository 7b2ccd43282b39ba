#include "mergetree/implicit_merge.hpp"

#include <algorithm>

namespace mergetree {

ImplicitMergeForest::ImplicitMergeForest(const ForestOptions& opts)
    : use_sets_(opts.implicit_disjoint_set_roots),
      rebuild_on_halving_(opts.rebuild_on_halving),
      audit_(opts.audit) {}

void ImplicitMergeForest::do_insert(std::uint32_t v) {
  engine_.add_node(key_at(v));
  set_parent_.push_back(v);
  set_min_.push_back(v);
  in_structure_.push_back(1);
  tomb_.push_back(0);
  ++structure_nodes_;
  ++structure_live_;
}

std::uint32_t ImplicitMergeForest::find(std::uint32_t v) {
  while (set_parent_[v] != v) {
    set_parent_[v] = set_parent_[set_parent_[v]];
    v = set_parent_[v];
  }
  return v;
}

void ImplicitMergeForest::unite(std::uint32_t a, std::uint32_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return;
  if (a > b) std::swap(a, b);
  set_parent_[b] = a;
  set_min_[a] = min_of(set_min_[a], set_min_[b]);
}

std::uint32_t ImplicitMergeForest::do_root(std::uint32_t v) {
  if (use_sets_) return set_min_[find(v)];
  return engine_.treemin(v);
}

std::uint32_t ImplicitMergeForest::do_nca(std::uint32_t v, std::uint32_t w) {
  if (do_root(v) != do_root(w)) return kNil;
  engine_.evert(v);
  return engine_.pathmin(w);
}

void ImplicitMergeForest::do_merge(std::uint32_t v, std::uint32_t w) {
  if (do_root(v) != do_root(w)) {
    engine_.evert(v);
    engine_.link(v, w);
    if (use_sets_) unite(v, w);
    ++counters_.structural_merges;
  } else {
    engine_.evert(v);
    const auto u = engine_.pathmin(w);
    if (u == v || u == w) return;
    engine_.cut(u);
    engine_.link(v, w);
    ++counters_.structural_merges;
  }
  if (audit_) engine_.audit();
}

void ImplicitMergeForest::do_erase(std::uint32_t v) {
  tomb_[v] = 1;
  --structure_live_;
  if (rebuild_on_halving_ && 2 * structure_live_ <= structure_nodes_) rebuild();
}

// Drops deleted nodes from the stored trees. A deleted node is a leaf of its
// real tree, so it is never the minimum of a path between live nodes; joining
// its neighbours to the largest of them keeps every such minimum.
void ImplicitMergeForest::rebuild() {
  ++rebuilds_;
  const auto n = static_cast<std::uint32_t>(engine_.size());
  const auto parents = engine_.extract_parents();
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (parents[v] == kNil) continue;
    adj[v].push_back(parents[v]);
    adj[parents[v]].push_back(v);
  }
  for (std::uint32_t d = 0; d < n; ++d) {
    if (!in_structure_[d] || !tomb_[d]) continue;
    in_structure_[d] = 0;
    auto& nb = adj[d];
    for (auto x : nb) {
      auto& back = adj[x];
      back.erase(std::find(back.begin(), back.end(), d));
    }
    if (nb.size() > 1) {
      const auto m = *std::max_element(nb.begin(), nb.end(), [&](auto a, auto b) { return less(a, b); });
      for (auto x : nb) {
        if (x == m) continue;
        adj[x].push_back(m);
        adj[m].push_back(x);
      }
    }
    nb.clear();
  }

  DynForest fresh;
  fresh.set_verify_paths(audit_);
  for (std::uint32_t v = 0; v < n; ++v) fresh.add_node(key_at(v));
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<std::uint32_t> queue;
  for (std::uint32_t r = 0; r < n; ++r) {
    if (!in_structure_[r] || seen[r]) continue;
    seen[r] = 1;
    queue.assign(1, r);
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const auto c = queue[i];
      for (auto x : adj[c]) {
        if (seen[x]) continue;
        seen[x] = 1;
        fresh.link(x, c);
        queue.push_back(x);
      }
    }
    for (auto x : queue) {
      set_parent_[x] = r;
    }
    set_min_[r] = fresh.treemin(r);
  }
  engine_ = std::move(fresh);
  structure_nodes_ = structure_live_;
}

std::vector<std::pair<NodeRef, NodeRef>> ImplicitMergeForest::engine_edges() {
  std::vector<std::pair<NodeRef, NodeRef>> out;
  const auto parents = engine_.extract_parents();
  for (std::uint32_t v = 0; v < parents.size(); ++v) {
    if (parents[v] != kNil) out.emplace_back(NodeRef{v}, NodeRef{parents[v]});
  }
  return out;
}

NodeRef ImplicitMergeForest::stored_path_min(NodeRef v, NodeRef w) {
  if (!is_live(v) || !is_live(w)) throw InvalidHandle("unknown or deleted node");
  if (!engine_.connected(v.index, w.index)) return NodeRef::null();
  engine_.evert(v.index);
  return NodeRef{engine_.pathmin(w.index)};
}

}  // namespace mergetree
