#pragma once

#include <utility>
#include <vector>

#include "mergetree/forest.hpp"
#include "mergetree/link_cut.hpp"

namespace mergetree {

/// Mergeable trees kept only up to equivalence: each tree is stored as a
/// dynamic tree on the same nodes whose path minima agree with the true
/// tree's nca for every pair. The stored shape generally differs from the
/// real one (a path may be stored as a star), so parent and cut are not
/// available.
class ImplicitMergeForest final : public MergeableForest {
 public:
  explicit ImplicitMergeForest(const ForestOptions& opts = {});

  std::string_view name() const noexcept override { return "implicit"; }
  Capability capability() const noexcept override { return {false, false}; }

  /// Edges of the stored dynamic trees, each as (child, parent) in the
  /// engine's current orientation. Deleted nodes may appear until a rebuild.
  std::vector<std::pair<NodeRef, NodeRef>> engine_edges();
  /// Minimum key on the stored path between v and w; null if disconnected.
  NodeRef stored_path_min(NodeRef v, NodeRef w);
  std::uint32_t rebuild_count() const noexcept { return rebuilds_; }

  void audit() const { engine_.audit(); }

 protected:
  void do_insert(std::uint32_t v) override;
  void do_merge(std::uint32_t v, std::uint32_t w) override;
  std::uint32_t do_root(std::uint32_t v) override;
  std::uint32_t do_nca(std::uint32_t v, std::uint32_t w) override;
  void do_erase(std::uint32_t v) override;

 private:
  std::uint32_t find(std::uint32_t v);
  void unite(std::uint32_t a, std::uint32_t b);
  void rebuild();

  DynForest engine_;
  bool use_sets_ = false;
  bool rebuild_on_halving_ = true;
  bool audit_ = false;
  std::vector<std::uint32_t> set_parent_;
  std::vector<std::uint32_t> set_min_;
  std::vector<std::uint8_t> in_structure_;
  std::vector<std::uint8_t> tomb_;
  std::uint32_t structure_nodes_ = 0;
  std::uint32_t structure_live_ = 0;
  std::uint32_t rebuilds_ = 0;
};

}  // namespace mergetree
