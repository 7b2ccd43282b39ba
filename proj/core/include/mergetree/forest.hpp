#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "mergetree/types.hpp"

namespace mergetree {

enum class Backend { naive, dyn, rank, implicit };

std::string_view to_string(Backend b) noexcept;
std::optional<Backend> parse_backend(std::string_view s) noexcept;

/// Heap-ordered forest supporting insert, merge, root, nca, parent, cut and
/// leaf delete. Backends differ in which of parent/cut they support; calling an
/// unsupported operation throws UnsupportedOperation.
///
/// Handles are dense insertion indices. Operations on a deleted or unknown
/// handle throw InvalidHandle.
class MergeableForest {
 public:
  virtual ~MergeableForest() = default;

  MergeableForest() = default;
  MergeableForest(const MergeableForest&) = delete;
  MergeableForest& operator=(const MergeableForest&) = delete;
  MergeableForest(MergeableForest&&) = default;
  MergeableForest& operator=(MergeableForest&&) = default;

  virtual std::string_view name() const noexcept = 0;
  virtual Capability capability() const noexcept = 0;

  NodeRef insert(double label);
  void merge(NodeRef v, NodeRef w);
  NodeRef root(NodeRef v);
  /// Null when v and w are in different trees.
  NodeRef nca(NodeRef v, NodeRef w);
  NodeRef parent(NodeRef v);
  void cut(NodeRef v);
  /// Removes leaf v. Backends that cannot observe children trust the caller.
  void erase(NodeRef v);

  const Key& key(NodeRef v) const;
  bool is_live(NodeRef v) const noexcept;
  std::size_t handle_count() const noexcept { return keys_.size(); }
  std::size_t live_count() const noexcept { return live_count_; }

  const OpCounters& counters() const noexcept { return counters_; }

 protected:
  virtual void do_insert(std::uint32_t v) = 0;
  virtual void do_merge(std::uint32_t v, std::uint32_t w) = 0;
  virtual std::uint32_t do_root(std::uint32_t v) = 0;
  virtual std::uint32_t do_nca(std::uint32_t v, std::uint32_t w) = 0;
  virtual std::uint32_t do_parent(std::uint32_t v);
  virtual void do_cut(std::uint32_t v);
  virtual void do_erase(std::uint32_t v) = 0;

  static constexpr std::uint32_t kNil = NodeRef::kNullIndex;

  const Key& key_at(std::uint32_t v) const noexcept { return keys_[v]; }
  bool alive(std::uint32_t v) const noexcept { return live_[v]; }
  bool less(std::uint32_t a, std::uint32_t b) const noexcept {
    if (a == kNil) return b != kNil;
    if (b == kNil) return false;
    return keys_[a] < keys_[b];
  }
  std::uint32_t max_of(std::uint32_t a, std::uint32_t b) const noexcept { return less(a, b) ? b : a; }
  std::uint32_t min_of(std::uint32_t a, std::uint32_t b) const noexcept { return less(a, b) ? a : b; }

  OpCounters counters_;

 private:
  std::uint32_t checked(NodeRef v) const;

  std::vector<Key> keys_;
  std::vector<bool> live_;
  std::size_t live_count_ = 0;
};

struct ForestOptions {
  /// Rebuild rank/implicit structures once live nodes drop to half of the
  /// nodes the structure holds.
  bool rebuild_on_halving = true;
  /// Implicit backend: answer root via a disjoint-set with per-set minima
  /// instead of the engine's tree-level aggregate.
  bool implicit_disjoint_set_roots = false;
  /// Run internal consistency checks after every public operation (slow).
  bool audit = false;
};

std::unique_ptr<MergeableForest> make_forest(Backend b, const ForestOptions& opts = {});

}  // namespace mergetree
