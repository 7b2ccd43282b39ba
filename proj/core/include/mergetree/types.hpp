#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace mergetree {

/// Node identity within one forest: a real label with the insertion sequence
/// number as tie-break. Comparisons are lexicographic, so no two live nodes
/// compare equal. The bottom sentinel compares below every real key.
struct Key {
  double label = 0.0;
  std::uint64_t id = 0;

  static constexpr std::uint64_t kBottomId = std::numeric_limits<std::uint64_t>::max();

  static constexpr Key bottom() noexcept {
    return Key{-std::numeric_limits<double>::infinity(), kBottomId};
  }
  constexpr bool is_bottom() const noexcept { return id == kBottomId; }

  friend constexpr bool operator==(const Key& a, const Key& b) noexcept {
    return a.id == b.id && (a.is_bottom() || a.label == b.label);
  }
  friend constexpr bool operator<(const Key& a, const Key& b) noexcept {
    if (a.is_bottom()) return !b.is_bottom();
    if (b.is_bottom()) return false;
    if (a.label != b.label) return a.label < b.label;
    return a.id < b.id;
  }
  friend constexpr bool operator>(const Key& a, const Key& b) noexcept { return b < a; }
  friend constexpr bool operator<=(const Key& a, const Key& b) noexcept { return !(b < a); }
  friend constexpr bool operator>=(const Key& a, const Key& b) noexcept { return !(a < b); }
};

/// Dense handle of a node inside one forest. Handles are issued in insertion
/// order starting at 0 and are never reused; a default-constructed handle is
/// null.
struct NodeRef {
  static constexpr std::uint32_t kNullIndex = std::numeric_limits<std::uint32_t>::max();

  std::uint32_t index = kNullIndex;

  constexpr NodeRef() noexcept = default;
  constexpr explicit NodeRef(std::uint32_t i) noexcept : index(i) {}

  static constexpr NodeRef null() noexcept { return NodeRef{}; }
  constexpr bool is_null() const noexcept { return index == kNullIndex; }
  constexpr explicit operator bool() const noexcept { return !is_null(); }

  friend constexpr auto operator<=>(NodeRef, NodeRef) noexcept = default;
};

inline std::string to_string(NodeRef r) {
  return r.is_null() ? std::string("null") : std::to_string(r.index);
}

struct Capability {
  bool supports_cut = false;
  bool supports_parent = false;
};

/// Event counters. Every field is monotone over a forest's lifetime.
struct OpCounters {
  std::uint64_t parent_changes = 0;
  std::uint64_t merges = 0;
  std::uint64_t structural_merges = 0;
  std::uint64_t merge_steps = 0;
  std::uint64_t topmost_queries = 0;
  std::uint64_t topmost_cost = 0;
  std::uint64_t solid_insertions = 0;
  std::uint64_t solid_deletions = 0;
  std::uint64_t rank_increases = 0;
  std::uint64_t shorter_path_nodes = 0;

  friend OpCounters operator-(const OpCounters& a, const OpCounters& b) noexcept {
    OpCounters d;
    d.parent_changes = a.parent_changes - b.parent_changes;
    d.merges = a.merges - b.merges;
    d.structural_merges = a.structural_merges - b.structural_merges;
    d.merge_steps = a.merge_steps - b.merge_steps;
    d.topmost_queries = a.topmost_queries - b.topmost_queries;
    d.topmost_cost = a.topmost_cost - b.topmost_cost;
    d.solid_insertions = a.solid_insertions - b.solid_insertions;
    d.solid_deletions = a.solid_deletions - b.solid_deletions;
    d.rank_increases = a.rank_increases - b.rank_increases;
    d.shorter_path_nodes = a.shorter_path_nodes - b.shorter_path_nodes;
    return d;
  }
  friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class InvalidHandle : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class PreconditionViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mergetree
