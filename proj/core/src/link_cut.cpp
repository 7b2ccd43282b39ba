#include "mergetree/link_cut.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mergetree {

DynForest::Index DynForest::add_node(const Key& key) {
  const auto v = static_cast<Index>(nodes_.size());
  // Virtual-subtree minima are stored as keys and mapped back through the id.
  if (key.id != v) throw std::invalid_argument("DynForest: key id must equal the node index");
  Node n;
  n.key = key;
  n.path_min = v;
  n.tree_min = v;
  nodes_.push_back(std::move(n));
  return v;
}

DynForest::Index DynForest::min_index(Index a, Index b) const noexcept {
  if (a == kNil) return b;
  if (b == kNil) return a;
  return nodes_[b].key < nodes_[a].key ? b : a;
}

bool DynForest::is_splay_root(Index x) const noexcept {
  const Index p = nodes_[x].up;
  return p == kNil || (nodes_[p].child[0] != x && nodes_[p].child[1] != x);
}

void DynForest::push(Index x) noexcept {
  Node& n = nodes_[x];
  if (!n.flip) return;
  std::swap(n.child[0], n.child[1]);
  for (Index c : n.child) {
    if (c != kNil) nodes_[c].flip = !nodes_[c].flip;
  }
  n.flip = false;
}

void DynForest::pull(Index x) {
  Node& n = nodes_[x];
  n.count = 1;
  n.path_min = x;
  n.tree_min = x;
  for (Index c : n.child) {
    if (c == kNil) continue;
    n.count += nodes_[c].count;
    n.path_min = min_index(n.path_min, nodes_[c].path_min);
    n.tree_min = min_index(n.tree_min, nodes_[c].tree_min);
  }
  if (!n.virtual_mins.empty()) {
    const Key& vk = *n.virtual_mins.begin();
    if (vk < nodes_[n.tree_min].key) n.tree_min = static_cast<Index>(vk.id);
  }
}

void DynForest::rotate(Index x) {
  const Index p = nodes_[x].up;
  const Index g = nodes_[p].up;
  const int dir = nodes_[p].child[1] == x ? 1 : 0;
  const Index b = nodes_[x].child[dir ^ 1];

  if (!is_splay_root(p)) {
    Node& gn = nodes_[g];
    gn.child[gn.child[1] == p ? 1 : 0] = x;
  }
  nodes_[x].up = g;

  nodes_[x].child[dir ^ 1] = p;
  nodes_[p].up = x;

  nodes_[p].child[dir] = b;
  if (b != kNil) nodes_[b].up = p;
  pull(p);
  pull(x);
}

void DynForest::splay(Index x) {
  splay_stack_.clear();
  for (Index y = x;; y = nodes_[y].up) {
    splay_stack_.push_back(y);
    if (is_splay_root(y)) break;
  }
  for (auto it = splay_stack_.rbegin(); it != splay_stack_.rend(); ++it) push(*it);

  while (!is_splay_root(x)) {
    const Index p = nodes_[x].up;
    if (!is_splay_root(p)) {
      const Index g = nodes_[p].up;
      const bool zigzig = (nodes_[g].child[0] == p) == (nodes_[p].child[0] == x);
      rotate(zigzig ? p : x);
    }
    rotate(x);
  }
}

DynForest::Index DynForest::access(Index x) {
  Index last = kNil;
  for (Index y = x; y != kNil; y = nodes_[y].up) {
    splay(y);
    Node& n = nodes_[y];
    if (n.child[1] != kNil) n.virtual_mins.insert(nodes_[nodes_[n.child[1]].tree_min].key);
    if (last != kNil) {
      auto it = n.virtual_mins.find(nodes_[nodes_[last].tree_min].key);
      n.virtual_mins.erase(it);
    }
    n.child[1] = last;
    pull(y);
    last = y;
  }
  splay(x);
  return last;
}

void DynForest::link(Index v, Index w) {
  if (root(v) != v) throw PreconditionViolation("link: node " + std::to_string(v) + " is not a root");
  if (root(w) == v) throw PreconditionViolation("link: nodes are already in one tree");
  access(v);
  access(w);
  nodes_[v].up = w;
  nodes_[w].virtual_mins.insert(nodes_[nodes_[v].tree_min].key);
  pull(w);
}

void DynForest::cut(Index v) {
  access(v);
  const Index l = nodes_[v].child[0];
  if (l == kNil) return;
  nodes_[l].up = kNil;
  nodes_[v].child[0] = kNil;
  pull(v);
}

DynForest::Index DynForest::root(Index v) {
  access(v);
  Index x = v;
  push(x);
  while (nodes_[x].child[0] != kNil) {
    x = nodes_[x].child[0];
    push(x);
  }
  splay(x);
  return x;
}

DynForest::Index DynForest::parent(Index v) {
  access(v);
  Index x = nodes_[v].child[0];
  if (x == kNil) return kNil;
  push(x);
  while (nodes_[x].child[1] != kNil) {
    x = nodes_[x].child[1];
    push(x);
  }
  splay(x);
  return x;
}

DynForest::Index DynForest::nca(Index v, Index w) {
  if (root(v) != root(w)) return kNil;
  access(v);
  return access(w);
}

void DynForest::evert(Index v) {
  access(v);
  nodes_[v].flip = !nodes_[v].flip;
}

DynForest::Index DynForest::pathmin(Index v) {
  access(v);
  return nodes_[v].path_min;
}

DynForest::Index DynForest::treemin(Index v) {
  access(v);
  return nodes_[v].tree_min;
}

std::size_t DynForest::depth(Index v) {
  access(v);
  return nodes_[v].count - 1;
}

DynForest::Index DynForest::topmost(Index v, const Key& threshold) {
  access(v);
  if (verify_paths_) {
    // In-order walk of v's splay tree lists the root path top to bottom.
    std::vector<Index> order;
    std::vector<Index> stack;
    Index x = v;
    while (x != kNil || !stack.empty()) {
      while (x != kNil) {
        push(x);
        stack.push_back(x);
        x = nodes_[x].child[0];
      }
      x = stack.back();
      stack.pop_back();
      order.push_back(x);
      x = nodes_[x].child[1];
    }
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (!(nodes_[order[i - 1]].key < nodes_[order[i]].key)) {
        throw PreconditionViolation("topmost: root path is not heap ordered");
      }
    }
    if (!(threshold < nodes_[v].key)) throw PreconditionViolation("topmost: key(v) must exceed the threshold");
  }

  Index best = kNil;
  Index last = kNil;
  for (Index x = v; x != kNil;) {
    push(x);
    last = x;
    if (threshold < nodes_[x].key) {
      best = x;
      x = nodes_[x].child[0];
    } else {
      x = nodes_[x].child[1];
    }
  }
  splay(best != kNil ? best : last);
  return best;
}

std::vector<DynForest::Index> DynForest::extract_parents() {
  std::vector<Index> out(nodes_.size(), kNil);
  for (Index v = 0; v < nodes_.size(); ++v) out[v] = parent(v);
  return out;
}

void DynForest::audit() const {
  const auto n = static_cast<Index>(nodes_.size());
  std::vector<std::multiset<Key>> expected_virtual(n);
  for (Index x = 0; x < n; ++x) {
    const Index p = nodes_[x].up;
    if (p != kNil && nodes_[p].child[0] != x && nodes_[p].child[1] != x) {
      expected_virtual[p].insert(nodes_[nodes_[x].tree_min].key);
    }
  }
  for (Index x = 0; x < n; ++x) {
    const Node& nd = nodes_[x];
    std::uint32_t count = 1;
    Index pmin = x;
    Index tmin = x;
    for (Index c : nd.child) {
      if (c == kNil) continue;
      if (nodes_[c].up != x) throw std::logic_error("audit: child/up mismatch at " + std::to_string(x));
      count += nodes_[c].count;
      pmin = min_index(pmin, nodes_[c].path_min);
      tmin = min_index(tmin, nodes_[c].tree_min);
    }
    if (!nd.virtual_mins.empty() && *nd.virtual_mins.begin() < nodes_[tmin].key) {
      tmin = static_cast<Index>(nd.virtual_mins.begin()->id);
    }
    if (count != nd.count || pmin != nd.path_min || tmin != nd.tree_min) {
      throw std::logic_error("audit: stale aggregate at node " + std::to_string(x));
    }
    if (expected_virtual[x] != nd.virtual_mins) {
      throw std::logic_error("audit: virtual minima mismatch at node " + std::to_string(x));
    }
  }
  // Acyclicity of the underlying representation: following up-links from any
  // node must terminate within n steps.
  for (Index x = 0; x < n; ++x) {
    Index y = x;
    for (Index steps = 0; y != kNil; ++steps) {
      if (steps > n) throw std::logic_error("audit: cycle through node " + std::to_string(x));
      y = nodes_[y].up;
    }
  }
}

}  // namespace mergetree
