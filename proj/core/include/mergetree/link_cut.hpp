#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "mergetree/types.hpp"

namespace mergetree {

/// Rooted dynamic forest over keyed nodes, represented as a splay-based
/// path decomposition (link-cut trees). Each splay node keeps:
///   - the minimum key on its splay subtree (path minimum),
///   - the minimum key over its splay subtree plus all hanging virtual
///     subtrees (tree minimum),
///   - a lazy reversal flag used by evert.
/// All operations run in O(log n) amortized time; virtual-subtree minima use a
/// multiset per node, adding a log factor only on preferred-child switches.
class DynForest {
 public:
  using Index = std::uint32_t;
  static constexpr Index kNil = NodeRef::kNullIndex;

  Index add_node(const Key& key);
  std::size_t size() const noexcept { return nodes_.size(); }
  const Key& key(Index v) const { return nodes_[v].key; }

  /// Makes w the parent of root v. Throws if v is not a root or w is in v's tree.
  void link(Index v, Index w);
  /// Removes the arc from v to its parent; no-op on a root.
  void cut(Index v);
  Index root(Index v);
  Index parent(Index v);
  /// kNil when v and w are in different trees.
  Index nca(Index v, Index w);
  bool connected(Index v, Index w) { return root(v) == root(w); }
  void evert(Index v);
  Index pathmin(Index v);
  Index treemin(Index v);
  /// Number of arcs between v and its root.
  std::size_t depth(Index v);

  /// Minimum-key ancestor of v (v included) whose key exceeds threshold.
  /// Requires keys on the root path to decrease strictly toward the root;
  /// with verify_paths enabled this is checked and PreconditionViolation thrown.
  Index topmost(Index v, const Key& threshold);

  void set_verify_paths(bool on) noexcept { verify_paths_ = on; }

  /// Represented parent of every node (kNil for roots).
  std::vector<Index> extract_parents();
  /// Recomputes every aggregate and virtual-set; throws std::logic_error on
  /// the first mismatch or if the represented forest has a cycle.
  void audit() const;

 private:
  struct Node {
    Key key;
    Index child[2] = {kNil, kNil};
    Index up = kNil;  // splay parent or path-parent
    bool flip = false;
    Index path_min = kNil;
    Index tree_min = kNil;
    std::uint32_t count = 1;
    std::multiset<Key> virtual_mins;
  };

  bool is_splay_root(Index x) const noexcept;
  void push(Index x) noexcept;
  void pull(Index x);
  void rotate(Index x);
  void splay(Index x);
  Index access(Index x);
  Index min_index(Index a, Index b) const noexcept;

  std::vector<Node> nodes_;
  std::vector<Index> splay_stack_;
  bool verify_paths_ = false;
};

}  // namespace mergetree
