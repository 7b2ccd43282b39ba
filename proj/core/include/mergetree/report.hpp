#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mergetree/forest.hpp"
#include "mergetree/workloads.hpp"

namespace mergetree {

enum class Verdict { pass, flag, fail };
std::string_view to_string(Verdict v) noexcept;

/// One counter compared against its closed-form limit. Observed values above
/// flag_above but within limit get a flag verdict.
struct BoundCheck {
  std::string name;
  std::string formula;
  std::uint64_t observed = 0;
  double limit = 0.0;
  double flag_above = 0.0;
  Verdict verdict = Verdict::pass;
};

/// What the bounds are evaluated on.
struct BoundInputs {
  Backend backend = Backend::naive;
  /// Counters over the whole trace.
  OpCounters total;
  /// n: nodes taking part in merges; m: merges.
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  bool cut_free = true;
  /// Leaf-merge phase, if any: its counters and merge count.
  std::optional<OpCounters> leaf_phase;
  std::uint64_t leaf_merges = 0;
};

std::vector<BoundCheck> check_bounds(const BoundInputs& in);
Verdict worst(const std::vector<BoundCheck>& checks) noexcept;

struct BenchReport {
  std::string workload;
  std::uint64_t param = 0;
  std::string backend;
  std::uint64_t n = 0;
  /// Merges over setup and measured phases.
  std::uint64_t m = 0;
  std::uint64_t measured_merges = 0;
  /// Measured phase only.
  OpCounters counters;
  OpCounters total;
  std::optional<std::uint64_t> expected_parent_changes;
  double seconds = 0.0;
  std::vector<BoundCheck> checks;
  Verdict verdict = Verdict::pass;
};

/// Runs setup then measured phase on a fresh forest. n is the number of
/// distinct nodes given as merge arguments.
BenchReport run_workload(const Workload& w, Backend backend, const ForestOptions& opts = {});

void write_text(std::ostream& out, const BenchReport& r);
/// Flat JSON object: the BenchReport scalars, one key per measured counter,
/// total_<counter> for whole-trace counters, and a checks array.
std::string to_json(const BenchReport& r);

}  // namespace mergetree
