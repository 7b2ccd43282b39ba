#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mergetree/forest.hpp"
#include "mergetree/report.hpp"
#include "mergetree/trace.hpp"

namespace mergetree {

struct FuzzConfig {
  std::uint64_t seed = 1;
  std::size_t ops = 1000;
  bool cuts = false;
  bool deletes = true;
  std::uint32_t max_live = 200;
  std::uint32_t max_merges = 500;
  /// Merge only pairs of leaves, so the shorter-path bound applies.
  bool leaf_merges = false;
  /// Compared against the naive forest. Backends without cut are dropped when
  /// cuts are on.
  std::vector<Backend> backends{Backend::dyn, Backend::rank, Backend::implicit};
  ForestOptions forest;
};

/// Random valid trace. Labels are small integers so ties are common; deletes
/// only remove leaves.
Trace generate_trace(const FuzzConfig& cfg);

struct Mismatch {
  std::size_t op_index = 0;
  std::string backend;
  std::string detail;
};

struct ReplayResult {
  std::optional<Mismatch> mismatch;
  /// Indices of the ops actually applied (lenient replay skips invalid ones).
  std::vector<std::size_t> applied;
  std::vector<Backend> backends;
  std::vector<OpCounters> counters;
  /// Counters of the naive forest.
  OpCounters oracle;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t queries = 0;
  bool cut_free = true;
  /// Every merge joined two leaves.
  bool leaf_only = true;
};

using ForestFactory = std::function<std::unique_ptr<MergeableForest>(Backend, const ForestOptions&)>;

/// Runs the trace on the naive forest and every backend, comparing query
/// answers and, where a backend exposes them, full parent maps after every
/// structural op. Lenient mode skips ops that are invalid for the current
/// forest instead of failing.
ReplayResult replay(const Trace& trace, const std::vector<Backend>& backends, const ForestOptions& opts = {},
                    bool lenient = false, const ForestFactory& factory = {});

/// Truncates after the first mismatch, then removes chunks while the mismatch
/// persists. Returns a valid trace that still fails.
Trace shrink(const Trace& trace, const std::vector<Backend>& backends, const ForestOptions& opts = {},
             const ForestFactory& factory = {});

struct FuzzResult {
  Trace trace;
  ReplayResult result;
  std::optional<Trace> reproducer;
  /// Bound checks per backend (including naive, first).
  std::vector<std::pair<Backend, std::vector<BoundCheck>>> checks;

  bool ok() const;
};

FuzzResult fuzz(const FuzzConfig& cfg);

std::vector<BoundCheck> trace_bounds(Backend b, const OpCounters& total, const ReplayResult& r);

}  // namespace mergetree
