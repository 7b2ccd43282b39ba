#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mergetree/forest.hpp"
#include "mergetree/trace.hpp"

namespace mergetree {

/// A deterministic op trace in two phases. The setup phase builds the
/// starting forest from singletons; counters are reported for the measured
/// phase only.
struct Workload {
  std::string name;
  std::uint64_t param = 0;
  Trace setup;
  Trace measured;
  /// Every measured merge joins two leaves.
  bool leaf_only = false;
  /// Exact parent changes of the measured phase, when the construction
  /// determines it.
  std::optional<std::uint64_t> expected_parent_changes;
};

/// Star of 2k leaves under a root, then k rounds of k merges; in round j the
/// i-th merge is merge(k+i, j). Labels equal node indices. Every merge moves
/// a node.
Workload workload_fig6(std::uint32_t k);

/// k must be a perfect square >= 4. Root 0, spine 1..k (parent of j is j-1),
/// leaf k+i under spine node i; then merge(k+i, k+sqrt(k)+i) for
/// i = 1..k-sqrt(k). Labels equal node indices.
Workload workload_fig7(std::uint32_t k);

/// n = 2^r singletons labelled 1..n; round t merges the deepest nodes of the
/// residue classes c and c + M/2 modulo M = n/2^(t-1), so each merge
/// interleaves two equal-length paths perfectly.
Workload workload_interleave(std::uint32_t n);
/// Parent changes of the interleave workload: sum over rounds t of
/// (n/2^t)(2^t - 1).
std::uint64_t interleave_parent_changes(std::uint32_t n);

/// n random labels, then 2n merges of random node pairs.
Workload workload_random(std::uint32_t n, std::uint64_t seed = 1);

/// Looks up fig6 | fig7 | interleave | random; throws std::invalid_argument.
Workload make_workload(std::string_view name, std::uint64_t param, std::uint64_t seed = 1);

/// Sorts by inserting each value and merging it with the current maximum, so
/// the forest stays one path; reads the order back through parent.
std::vector<double> sort_via_merge(std::span<const double> values, Backend backend = Backend::rank);

}  // namespace mergetree
