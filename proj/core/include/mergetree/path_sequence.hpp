#pragma once

#include <cstdint>
#include <vector>

#include "mergetree/types.hpp"

namespace mergetree {

/// A family of ordered sequences over forest nodes, one per solid path.
/// Along a heap-ordered path keys grow from top to bottom, so ordering a
/// sequence by key is the same as ordering it by path position. Each sequence
/// is a treap with subtree counts, giving O(log n) expected time for insert,
/// erase, threshold search and position lookup. A node belongs to at most one
/// sequence at a time; pool slot i is node i.
class PathSequences {
 public:
  using Index = std::uint32_t;
  static constexpr Index kNil = NodeRef::kNullIndex;

  /// Registers a node slot; it starts outside every sequence.
  void add_node(const Key& key);
  void clear_node(Index v);

  void insert(Index& root, Index v);
  void erase(Index& root, Index v);

  Index first(Index root) const noexcept;
  Index last(Index root) const noexcept;
  /// First element (topmost node) whose key exceeds threshold, or kNil.
  Index first_greater(Index root, const Key& threshold) const noexcept;
  /// Number of elements with key strictly below v's key.
  std::uint32_t position(Index root, Index v) const noexcept;
  std::uint32_t size(Index root) const noexcept { return root == kNil ? 0 : nodes_[root].count; }

  std::vector<Index> to_vector(Index root) const;

 private:
  struct Node {
    Key key;
    std::uint64_t priority = 0;
    Index left = kNil;
    Index right = kNil;
    std::uint32_t count = 1;
  };

  void pull(Index x) noexcept;
  /// Splits into (< key) and (>= key).
  void split(Index t, const Key& key, Index& lo, Index& hi) noexcept;
  Index join(Index a, Index b) noexcept;

  std::vector<Node> nodes_;
};

}  // namespace mergetree
