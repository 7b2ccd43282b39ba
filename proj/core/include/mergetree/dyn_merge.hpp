#pragma once

#include <vector>

#include "mergetree/forest.hpp"
#include "mergetree/link_cut.hpp"

namespace mergetree {

/// Mergeable trees stored one-to-one as dynamic trees. A merge walks the two
/// merge paths top-down with topmost queries, moving one subpath per step via
/// link and cut. Supports cuts; parent is an O(1) read of a mirror array kept
/// in lockstep with the engine.
class DynMergeForest final : public MergeableForest {
 public:
  explicit DynMergeForest(const ForestOptions& opts = {});

  std::string_view name() const noexcept override { return "dyn"; }
  Capability capability() const noexcept override { return {true, true}; }

  std::vector<NodeRef> parent_map() const;

  /// Throws std::logic_error if the engine, the mirror array, or heap order
  /// disagree.
  void audit();

 protected:
  void do_insert(std::uint32_t v) override;
  void do_merge(std::uint32_t v, std::uint32_t w) override;
  std::uint32_t do_root(std::uint32_t v) override;
  std::uint32_t do_nca(std::uint32_t v, std::uint32_t w) override;
  std::uint32_t do_parent(std::uint32_t v) override;
  void do_cut(std::uint32_t v) override;
  void do_erase(std::uint32_t v) override;

 private:
  void link_tracked(std::uint32_t v, std::uint32_t w);
  void cut_tracked(std::uint32_t v);
  void remember(std::uint32_t v);
  void maybe_audit();

  DynForest engine_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> children_;
  // Nodes touched by the current merge with their parent on entry.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> touched_;
  std::vector<std::uint64_t> touched_stamp_;
  std::uint64_t stamp_ = 0;
  bool audit_ = false;
};

}  // namespace mergetree
