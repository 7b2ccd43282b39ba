#pragma once

#include <cstdint>
#include <vector>

#include "mergetree/forest.hpp"
#include "mergetree/path_sequence.hpp"

namespace mergetree {

/// Mergeable trees without cuts. Nodes are partitioned into solid paths: an
/// arc is solid iff both ends have the same rank, rank = floor(lg size). Each
/// node stores its parent, its solid child, a header for its path and its
/// dashed size d(x) = 1 + total size of its dashed children. Only path tops
/// carry a subtree size; the others follow from size(x) = size(p(x)) - d(p(x)).
///
/// parent is an O(1) read, root and nca walk at most O(log n) solid paths, and
/// merge moves whole runs of nodes between paths as ranks grow.
class RankMergeForest final : public MergeableForest {
 public:
  explicit RankMergeForest(const ForestOptions& opts = {});

  std::string_view name() const noexcept override { return "rank"; }
  Capability capability() const noexcept override { return {false, true}; }

  struct Steps {
    NodeRef node;
    std::uint32_t steps = 0;
  };
  Steps root_with_steps(NodeRef v);
  Steps nca_with_steps(NodeRef v, NodeRef w);

  /// Topmost node on v's solid path whose key exceeds threshold; null if none.
  NodeRef topmost_solid(NodeRef v, const Key& threshold);

  std::uint32_t rank(NodeRef v) const;
  NodeRef solid_child(NodeRef v) const;
  /// Nodes of v's solid path, top to bottom.
  std::vector<NodeRef> solid_path(NodeRef v) const;
  std::vector<NodeRef> parent_map() const;
  std::uint32_t rebuild_count() const noexcept { return rebuilds_; }

  /// Recomputes every size from the parent array and checks ranks, solid
  /// arcs, dashed sizes, stored top sizes, headers and path sequences.
  /// Throws std::logic_error on the first inconsistency.
  void audit() const;

 protected:
  void do_insert(std::uint32_t v) override;
  void do_merge(std::uint32_t v, std::uint32_t w) override;
  std::uint32_t do_root(std::uint32_t v) override;
  std::uint32_t do_nca(std::uint32_t v, std::uint32_t w) override;
  std::uint32_t do_parent(std::uint32_t v) override;
  void do_erase(std::uint32_t v) override;

 private:
  struct Header {
    std::uint32_t top = kNil;
    std::uint32_t seq = kNil;
    std::uint32_t rank = 0;
    std::uint32_t top_size = 1;
    bool free = false;
  };
  // Per-merge record of the first (bottommost) node a traversal side
  // visited on a path and the node it came from.
  struct Visit {
    std::uint64_t stamp = 0;
    std::uint32_t bottom = kNil;
    std::uint32_t below = kNil;
  };
  struct Walk {
    std::uint32_t cur[2];
    std::uint32_t answer;
    std::uint32_t steps;
  };
  struct Item {
    std::uint32_t node;
    std::uint32_t size;
    std::uint32_t rank;
  };

  std::uint32_t new_header(std::uint32_t top, std::uint32_t rank, std::uint32_t top_size);
  void retire_header(std::uint32_t h);
  void visit(int side, std::uint32_t node, std::uint32_t from);
  Walk traverse(std::uint32_t a, std::uint32_t b);
  std::uint32_t topmost_query(std::uint32_t y, std::uint32_t x);

  void reparent(std::uint32_t x, std::uint32_t y, std::uint32_t z);
  void solid_case(std::uint32_t x, std::uint32_t op, std::uint32_t y, std::uint32_t z);
  void dashed_case(std::uint32_t x, std::uint32_t op, std::uint32_t y, std::uint32_t z);
  void move_node(std::uint32_t node, std::uint32_t from, std::uint32_t to);

  void rebuild();
  void maybe_audit() const;

  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> solid_;
  std::vector<std::uint32_t> hdr_;
  std::vector<std::uint32_t> d_;
  std::vector<std::uint32_t> live_children_;
  std::vector<std::uint8_t> in_structure_;
  std::vector<std::uint8_t> tomb_;
  std::uint32_t structure_nodes_ = 0;
  std::uint32_t structure_live_ = 0;

  std::vector<Header> headers_;
  std::vector<std::uint32_t> free_headers_;
  std::vector<std::uint32_t> retired_;
  PathSequences seq_;

  std::vector<Visit> visits_[2];
  std::uint64_t stamp_ = 0;
  bool merging_ = false;
  std::uint32_t moved_ = 0;
  std::uint32_t last_moved_ = kNil;
  std::vector<Item> scratch_;

  bool rebuild_on_halving_ = true;
  bool audit_ = false;
  std::uint32_t rebuilds_ = 0;
};

}  // namespace mergetree
