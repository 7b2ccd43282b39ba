#include "mergetree/forest.hpp"

#include <cmath>

#include "mergetree/dyn_merge.hpp"
#include "mergetree/implicit_merge.hpp"
#include "mergetree/naive_forest.hpp"
#include "mergetree/rank_merge.hpp"

namespace mergetree {

std::string_view to_string(Backend b) noexcept {
  switch (b) {
    case Backend::naive: return "naive";
    case Backend::dyn: return "dyn";
    case Backend::rank: return "rank";
    case Backend::implicit: return "implicit";
  }
  return "?";
}

std::optional<Backend> parse_backend(std::string_view s) noexcept {
  if (s == "naive") return Backend::naive;
  if (s == "dyn") return Backend::dyn;
  if (s == "rank") return Backend::rank;
  if (s == "implicit") return Backend::implicit;
  return std::nullopt;
}

std::uint32_t MergeableForest::checked(NodeRef v) const {
  if (v.is_null() || v.index >= keys_.size()) {
    throw InvalidHandle("unknown node handle " + to_string(v));
  }
  if (!live_[v.index]) throw InvalidHandle("node " + to_string(v) + " was deleted");
  return v.index;
}

NodeRef MergeableForest::insert(double label) {
  if (std::isnan(label)) throw std::invalid_argument("node label must not be NaN");
  if (keys_.size() >= NodeRef::kNullIndex) throw std::length_error("forest handle space exhausted");
  const auto v = static_cast<std::uint32_t>(keys_.size());
  keys_.push_back(Key{label, v});
  live_.push_back(true);
  ++live_count_;
  do_insert(v);
  return NodeRef{v};
}

void MergeableForest::merge(NodeRef v, NodeRef w) {
  const auto a = checked(v);
  const auto b = checked(w);
  ++counters_.merges;
  const auto before = counters_.parent_changes;
  do_merge(a, b);
  if (counters_.parent_changes != before) ++counters_.structural_merges;
}

NodeRef MergeableForest::root(NodeRef v) { return NodeRef{do_root(checked(v))}; }

NodeRef MergeableForest::nca(NodeRef v, NodeRef w) {
  return NodeRef{do_nca(checked(v), checked(w))};
}

NodeRef MergeableForest::parent(NodeRef v) {
  const auto a = checked(v);
  if (!capability().supports_parent) {
    throw UnsupportedOperation(std::string(name()) + " backend does not support parent");
  }
  return NodeRef{do_parent(a)};
}

void MergeableForest::cut(NodeRef v) {
  const auto a = checked(v);
  if (!capability().supports_cut) {
    throw UnsupportedOperation(std::string(name()) + " backend does not support cut");
  }
  do_cut(a);
}

void MergeableForest::erase(NodeRef v) {
  const auto a = checked(v);
  do_erase(a);
  live_[a] = false;
  --live_count_;
}

const Key& MergeableForest::key(NodeRef v) const { return keys_[checked(v)]; }

bool MergeableForest::is_live(NodeRef v) const noexcept {
  return !v.is_null() && v.index < keys_.size() && live_[v.index];
}

std::uint32_t MergeableForest::do_parent(std::uint32_t) {
  throw UnsupportedOperation(std::string(name()) + " backend does not support parent");
}

void MergeableForest::do_cut(std::uint32_t) {
  throw UnsupportedOperation(std::string(name()) + " backend does not support cut");
}

std::unique_ptr<MergeableForest> make_forest(Backend b, const ForestOptions& opts) {
  switch (b) {
    case Backend::naive: return std::make_unique<NaiveForest>();
    case Backend::dyn: return std::make_unique<DynMergeForest>(opts);
    case Backend::rank: return std::make_unique<RankMergeForest>(opts);
    case Backend::implicit: return std::make_unique<ImplicitMergeForest>(opts);
  }
  throw std::invalid_argument("unknown backend");
}

}  // namespace mergetree
