#include "mergetree/path_sequence.hpp"

namespace mergetree {

namespace {

std::uint64_t mix(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

void PathSequences::add_node(const Key& key) {
  Node n;
  n.key = key;
  n.priority = mix(nodes_.size());
  nodes_.push_back(n);
}

void PathSequences::clear_node(Index v) {
  Node& n = nodes_[v];
  n.left = n.right = kNil;
  n.count = 1;
}

void PathSequences::pull(Index x) noexcept {
  Node& n = nodes_[x];
  n.count = 1 + size(n.left) + size(n.right);
}

void PathSequences::split(Index t, const Key& key, Index& lo, Index& hi) noexcept {
  if (t == kNil) {
    lo = hi = kNil;
    return;
  }
  if (nodes_[t].key < key) {
    split(nodes_[t].right, key, nodes_[t].right, hi);
    lo = t;
  } else {
    split(nodes_[t].left, key, lo, nodes_[t].left);
    hi = t;
  }
  pull(t);
}

PathSequences::Index PathSequences::join(Index a, Index b) noexcept {
  if (a == kNil) return b;
  if (b == kNil) return a;
  if (nodes_[a].priority > nodes_[b].priority) {
    nodes_[a].right = join(nodes_[a].right, b);
    pull(a);
    return a;
  }
  nodes_[b].left = join(a, nodes_[b].left);
  pull(b);
  return b;
}

void PathSequences::insert(Index& root, Index v) {
  clear_node(v);
  Index lo = kNil;
  Index hi = kNil;
  split(root, nodes_[v].key, lo, hi);
  root = join(join(lo, v), hi);
}

void PathSequences::erase(Index& root, Index v) {
  Index lo = kNil;
  Index hi = kNil;
  split(root, nodes_[v].key, lo, hi);
  // hi starts with v: peel it off.
  Index mid = kNil;
  Index rest = kNil;
  const Key& k = nodes_[v].key;
  // Elements > k are those >= successor; split on "not less than or equal".
  {
    Index t = hi;
    Index* lo_slot = &mid;
    Index* hi_slot = &rest;
    // Split hi into (<= k) and (> k) iteratively.
    std::vector<Index> path;
    while (t != kNil) {
      path.push_back(t);
      if (k < nodes_[t].key) {
        *hi_slot = t;
        hi_slot = &nodes_[t].left;
        t = nodes_[t].left;
      } else {
        *lo_slot = t;
        lo_slot = &nodes_[t].right;
        t = nodes_[t].right;
      }
    }
    *lo_slot = kNil;
    *hi_slot = kNil;
    for (auto it = path.rbegin(); it != path.rend(); ++it) pull(*it);
  }
  clear_node(v);
  root = join(lo, rest);
}

PathSequences::Index PathSequences::first(Index root) const noexcept {
  if (root == kNil) return kNil;
  while (nodes_[root].left != kNil) root = nodes_[root].left;
  return root;
}

PathSequences::Index PathSequences::last(Index root) const noexcept {
  if (root == kNil) return kNil;
  while (nodes_[root].right != kNil) root = nodes_[root].right;
  return root;
}

PathSequences::Index PathSequences::first_greater(Index root, const Key& threshold) const noexcept {
  Index best = kNil;
  for (Index t = root; t != kNil;) {
    if (threshold < nodes_[t].key) {
      best = t;
      t = nodes_[t].left;
    } else {
      t = nodes_[t].right;
    }
  }
  return best;
}

std::uint32_t PathSequences::position(Index root, Index v) const noexcept {
  const Key& k = nodes_[v].key;
  std::uint32_t below = 0;
  for (Index t = root; t != kNil;) {
    if (nodes_[t].key < k) {
      below += 1 + size(nodes_[t].left);
      t = nodes_[t].right;
    } else {
      t = nodes_[t].left;
    }
  }
  return below;
}

std::vector<PathSequences::Index> PathSequences::to_vector(Index root) const {
  std::vector<Index> out;
  std::vector<Index> stack;
  Index t = root;
  while (t != kNil || !stack.empty()) {
    while (t != kNil) {
      stack.push_back(t);
      t = nodes_[t].left;
    }
    t = stack.back();
    stack.pop_back();
    out.push_back(t);
    t = nodes_[t].right;
  }
  return out;
}

}  // namespace mergetree
