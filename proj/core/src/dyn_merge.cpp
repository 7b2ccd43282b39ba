#include "mergetree/dyn_merge.hpp"

#include <algorithm>
#include <string>

namespace mergetree {

DynMergeForest::DynMergeForest(const ForestOptions& opts) : audit_(opts.audit) {
  engine_.set_verify_paths(opts.audit);
}

void DynMergeForest::do_insert(std::uint32_t v) {
  engine_.add_node(key_at(v));
  parent_.push_back(kNil);
  children_.push_back(0);
  touched_stamp_.push_back(0);
}

void DynMergeForest::remember(std::uint32_t v) {
  if (touched_stamp_[v] == stamp_) return;
  touched_stamp_[v] = stamp_;
  touched_.emplace_back(v, parent_[v]);
}

void DynMergeForest::link_tracked(std::uint32_t v, std::uint32_t w) {
  remember(v);
  engine_.link(v, w);
  parent_[v] = w;
  ++children_[w];
}

void DynMergeForest::cut_tracked(std::uint32_t v) {
  if (parent_[v] == kNil) return;
  remember(v);
  engine_.cut(v);
  --children_[parent_[v]];
  parent_[v] = kNil;
}

void DynMergeForest::do_merge(std::uint32_t v, std::uint32_t w) {
  const auto u = engine_.nca(v, w);
  if (u == v || u == w) return;

  {
    const std::size_t base = u == kNil ? 0 : engine_.depth(u);
    const std::size_t pv = engine_.depth(v) + 1 - base;
    const std::size_t pw = engine_.depth(w) + 1 - base;
    counters_.shorter_path_nodes += std::min(pv, pw);
  }

  ++stamp_;
  touched_.clear();

  const Key threshold = u == kNil ? Key::bottom() : key_at(u);
  auto x = engine_.topmost(v, threshold);
  auto y = engine_.topmost(w, threshold);
  if (less(x, y)) {
    std::swap(x, y);
    std::swap(v, w);
  }
  if (u != kNil) cut_tracked(x);

  while (less(x, w)) {
    ++counters_.merge_steps;
    const auto t = engine_.topmost(w, key_at(x));
    if (audit_ && !less(x, t)) throw std::logic_error("dyn merge: step did not advance");
    // p(t) must be read before t is detached.
    const auto pt = parent_[t];
    link_tracked(x, pt);
    cut_tracked(t);
    y = x;
    x = t;
    std::swap(v, w);
  }
  link_tracked(x, w);

  for (const auto& [node, before] : touched_) {
    if (parent_[node] != before) ++counters_.parent_changes;
  }
  maybe_audit();
}

std::uint32_t DynMergeForest::do_root(std::uint32_t v) { return engine_.root(v); }

std::uint32_t DynMergeForest::do_nca(std::uint32_t v, std::uint32_t w) { return engine_.nca(v, w); }

std::uint32_t DynMergeForest::do_parent(std::uint32_t v) { return parent_[v]; }

void DynMergeForest::do_cut(std::uint32_t v) {
  if (parent_[v] == kNil) return;
  engine_.cut(v);
  --children_[parent_[v]];
  parent_[v] = kNil;
  ++counters_.parent_changes;
  maybe_audit();
}

void DynMergeForest::do_erase(std::uint32_t v) {
  if (children_[v] != 0) throw PreconditionViolation("delete: node " + std::to_string(v) + " is not a leaf");
  do_cut(v);
}

std::vector<NodeRef> DynMergeForest::parent_map() const {
  std::vector<NodeRef> out(parent_.size());
  for (std::size_t i = 0; i < parent_.size(); ++i) out[i] = NodeRef{parent_[i]};
  return out;
}

void DynMergeForest::maybe_audit() {
  if (audit_) audit();
}

void DynMergeForest::audit() {
  engine_.audit();
  const auto represented = engine_.extract_parents();
  for (std::uint32_t v = 0; v < parent_.size(); ++v) {
    if (represented[v] != parent_[v]) {
      throw std::logic_error("dyn audit: mirror parent differs from engine at node " + std::to_string(v));
    }
    if (parent_[v] != kNil && !less(parent_[v], v)) {
      throw std::logic_error("dyn audit: heap order violated at node " + std::to_string(v));
    }
  }
}

}  // namespace mergetree
