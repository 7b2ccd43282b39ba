#pragma once

#include <vector>

#include "mergetree/forest.hpp"

namespace mergetree {

/// Reference forest: parent links only, every query walks the tree, and merge
/// literally sorts the union of the two root paths and relinks it. This is the
/// ground truth for differential testing, so it favors obviousness over speed.
class NaiveForest final : public MergeableForest {
 public:
  std::string_view name() const noexcept override { return "naive"; }
  Capability capability() const noexcept override { return {true, true}; }

  /// Parent of every handle (null for roots and deleted nodes).
  std::vector<NodeRef> parent_map() const;
  std::vector<NodeRef> root_path(NodeRef v) const;
  std::size_t child_count(NodeRef v) const;
  bool is_leaf(NodeRef v) const { return child_count(v) == 0; }

  /// Nodes that have been on a merge path (the n of the counter bounds).
  std::size_t participants() const noexcept { return participants_; }

 protected:
  void do_insert(std::uint32_t v) override;
  void do_merge(std::uint32_t v, std::uint32_t w) override;
  std::uint32_t do_root(std::uint32_t v) override;
  std::uint32_t do_nca(std::uint32_t v, std::uint32_t w) override;
  std::uint32_t do_parent(std::uint32_t v) override;
  void do_cut(std::uint32_t v) override;
  void do_erase(std::uint32_t v) override;

 private:
  void set_parent(std::uint32_t v, std::uint32_t p);
  std::vector<std::uint32_t> path_up(std::uint32_t v) const;

  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> children_;
  std::vector<bool> participated_;
  std::size_t participants_ = 0;
};

}  // namespace mergetree
