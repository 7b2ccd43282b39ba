#include "mergetree/naive_forest.hpp"

#include <algorithm>

namespace mergetree {

void NaiveForest::do_insert(std::uint32_t) {
  parent_.push_back(kNil);
  children_.push_back(0);
  participated_.push_back(false);
}

std::vector<std::uint32_t> NaiveForest::path_up(std::uint32_t v) const {
  std::vector<std::uint32_t> out;
  for (auto x = v; x != kNil; x = parent_[x]) out.push_back(x);
  return out;
}

void NaiveForest::set_parent(std::uint32_t v, std::uint32_t p) {
  if (parent_[v] == p) return;
  if (parent_[v] != kNil) --children_[parent_[v]];
  if (p != kNil) ++children_[p];
  parent_[v] = p;
  ++counters_.parent_changes;
}

void NaiveForest::do_merge(std::uint32_t v, std::uint32_t w) {
  const auto pv = path_up(v);
  const auto pw = path_up(w);

  // Merge paths measured down from the nca, inclusive.
  const auto u = do_nca(v, w);
  if (u != v && u != w) {
    auto len_to = [&](const std::vector<std::uint32_t>& p) -> std::uint64_t {
      if (u == kNil) return p.size();
      return static_cast<std::uint64_t>(std::find(p.begin(), p.end(), u) - p.begin()) + 1;
    };
    counters_.shorter_path_nodes += std::min(len_to(pv), len_to(pw));
  }

  std::vector<std::uint32_t> s = pv;
  s.insert(s.end(), pw.begin(), pw.end());
  std::sort(s.begin(), s.end(), [this](auto a, auto b) { return less(a, b); });
  s.erase(std::unique(s.begin(), s.end()), s.end());

  for (auto x : s) {
    if (!participated_[x]) {
      participated_[x] = true;
      ++participants_;
    }
  }
  for (std::size_t i = 0; i < s.size(); ++i) set_parent(s[i], i == 0 ? kNil : s[i - 1]);
}

std::uint32_t NaiveForest::do_root(std::uint32_t v) {
  while (parent_[v] != kNil) v = parent_[v];
  return v;
}

std::uint32_t NaiveForest::do_nca(std::uint32_t v, std::uint32_t w) {
  const auto pv = path_up(v);
  std::vector<bool> on(parent_.size(), false);
  for (auto x : pv) on[x] = true;
  for (auto x = w; x != kNil; x = parent_[x]) {
    if (on[x]) return x;
  }
  return kNil;
}

std::uint32_t NaiveForest::do_parent(std::uint32_t v) { return parent_[v]; }

void NaiveForest::do_cut(std::uint32_t v) { set_parent(v, kNil); }

void NaiveForest::do_erase(std::uint32_t v) {
  if (children_[v] != 0) throw PreconditionViolation("delete: node " + std::to_string(v) + " is not a leaf");
  if (parent_[v] != kNil) set_parent(v, kNil);
}

std::vector<NodeRef> NaiveForest::parent_map() const {
  std::vector<NodeRef> out(parent_.size());
  for (std::size_t i = 0; i < parent_.size(); ++i) out[i] = NodeRef{parent_[i]};
  return out;
}

std::vector<NodeRef> NaiveForest::root_path(NodeRef v) const {
  if (!is_live(v)) throw InvalidHandle("root_path: bad handle");
  std::vector<NodeRef> out;
  for (auto x : path_up(v.index)) out.emplace_back(x);
  return out;
}

std::size_t NaiveForest::child_count(NodeRef v) const {
  if (!is_live(v)) throw InvalidHandle("child_count: bad handle");
  return children_[v.index];
}

}  // namespace mergetree
