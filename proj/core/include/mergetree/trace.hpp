#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mergetree/forest.hpp"

namespace mergetree {

enum class OpKind { insert, merge, cut, erase, root, nca, parent };

/// One line of the operation-trace format:
///   i <label> | m <v> <w> | c <v> | d <v> | q root <v> | q nca <v> <w> | q parent <v>
/// Node arguments are 0-based insertion indices.
struct Op {
  OpKind kind = OpKind::insert;
  double label = 0.0;
  std::uint32_t a = NodeRef::kNullIndex;
  std::uint32_t b = NodeRef::kNullIndex;

  static Op insert(double label) { return {OpKind::insert, label}; }
  static Op merge(std::uint32_t v, std::uint32_t w) { return {OpKind::merge, 0.0, v, w}; }
  static Op cut(std::uint32_t v) { return {OpKind::cut, 0.0, v}; }
  static Op erase(std::uint32_t v) { return {OpKind::erase, 0.0, v}; }
  static Op root(std::uint32_t v) { return {OpKind::root, 0.0, v}; }
  static Op nca(std::uint32_t v, std::uint32_t w) { return {OpKind::nca, 0.0, v, w}; }
  static Op parent(std::uint32_t v) { return {OpKind::parent, 0.0, v}; }

  bool is_query() const noexcept {
    return kind == OpKind::root || kind == OpKind::nca || kind == OpKind::parent;
  }
  friend bool operator==(const Op&, const Op&) = default;
};

using Trace = std::vector<Op>;

class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Blank lines and lines starting with '#' yield nullopt.
std::optional<Op> parse_op(std::string_view line, std::size_t line_no = 0);
Trace read_trace(std::istream& in);
std::string format_op(const Op& op);
void write_trace(std::ostream& out, const Trace& trace);

/// Applies op to forest. Queries return their answer; other ops return nullopt.
std::optional<NodeRef> apply(MergeableForest& forest, const Op& op);
/// "= <index>" or "= null".
std::string format_answer(NodeRef r);
/// Applies every op, writing one answer line per query.
void run_trace(MergeableForest& forest, const Trace& trace, std::ostream& out);

}  // namespace mergetree
