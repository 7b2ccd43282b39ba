#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mergetree/forest.hpp"

namespace mergetree {

enum class VertexKind { source, sink, up_fork, down_fork };

/// Directed multigraph whose vertices are listed in canonical (sweep) order:
/// vertex i has label labels[i], labels strictly increase with the index, and
/// every arc goes from a lower to a higher index.
struct ReebGraph {
  std::vector<double> labels;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> arcs;

  std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(labels.size()); }
  friend bool operator==(const ReebGraph&, const ReebGraph&) = default;
};

struct Adjacency {
  std::vector<std::vector<std::uint32_t>> in;
  std::vector<std::vector<std::uint32_t>> out;
};
Adjacency adjacency(const ReebGraph& g);

struct ValidationResult {
  bool ok = true;
  std::string message;
  explicit operator bool() const noexcept { return ok; }
};

/// Checks labels, arc direction, vertex degree signatures and the sweep
/// frontier. Reports the first failure found.
ValidationResult validate(const ReebGraph& g);

/// Kind of every vertex; the graph must be valid.
std::vector<VertexKind> vertex_kinds(const ReebGraph& g);

/// Connected component id per vertex (ignoring arc direction), numbered in
/// order of each component's first vertex.
std::vector<std::uint32_t> components(const ReebGraph& g, std::uint32_t* count = nullptr);

/// Arcs flipped and canonical order reversed: vertex i becomes n-1-i with
/// label -labels[i].
ReebGraph reversed(const ReebGraph& g);

/// Random valid, connected graph with n_target vertices rounded down to an
/// even number (a pairing needs an even count); n_target must be >= 2.
ReebGraph generate_reeb(std::uint64_t seed, std::uint32_t n_target);

enum class PairType { a, b, c, d };
char to_char(PairType t) noexcept;

/// x is the later vertex in canonical order.
struct VertexPair {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  PairType type = PairType::a;
  friend bool operator==(const VertexPair&, const VertexPair&) = default;
};
/// Sorted by x.
using Pairing = std::vector<VertexPair>;

class ReebError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PairingOptions {
  Backend backend = Backend::rank;
  /// Reject graphs with more than one connected component.
  bool require_connected = false;
  ForestOptions forest;
};

struct PairingStats {
  /// Parent steps taken by all sink walks together.
  std::uint64_t sink_walk_steps = 0;
  OpCounters forward;
  OpCounters reverse;
};

/// Direct sweep with explicit predecessor walking; quadratic, used as the
/// reference for both fast algorithms.
Pairing pair_reference(const ReebGraph& g);

/// One sweep over mergeable trees; needs a backend that supports parent.
Pairing pair_single_pass(const ReebGraph& g, const PairingOptions& opts = {}, PairingStats* stats = nullptr);

/// Forward and reverse sweeps without parent queries; the backend defaults to
/// the implicit one.
Pairing pair_two_pass(const ReebGraph& g, PairingOptions opts = {Backend::implicit}, PairingStats* stats = nullptr);

/// Every vertex in exactly one pair, exactly one type-d pair per component,
/// and pair types consistent with the vertex kinds.
ValidationResult check_pairing(const ReebGraph& g, const Pairing& p);

class ReebFormatError : public std::runtime_error {
 public:
  ReebFormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Text format: "reeb <n>", then n lines "v <index> <label>", then
/// "a <from> <to>" lines; '#' starts a comment. Only syntax is checked here;
/// run validate() for the graph invariants.
ReebGraph read_reeb(std::istream& in);
void write_reeb(std::ostream& out, const ReebGraph& g);
/// Lines "p <x> <y> <type>" sorted by x.
void write_pairing(std::ostream& out, const Pairing& p);

}  // namespace mergetree
