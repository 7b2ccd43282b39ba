#include "mergetree/trace.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace mergetree {

namespace {

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const auto start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::uint32_t parse_index(std::string_view w, std::size_t line_no) {
  std::uint32_t v = 0;
  const auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
  if (ec != std::errc() || p != w.data() + w.size() || v == NodeRef::kNullIndex) {
    throw TraceParseError(line_no, "bad node index '" + std::string(w) + "'");
  }
  return v;
}

double parse_label(std::string_view w, std::size_t line_no) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), x);
  if (ec != std::errc() || p != w.data() + w.size()) {
    throw TraceParseError(line_no, "bad label '" + std::string(w) + "'");
  }
  return x;
}

void expect_words(const std::vector<std::string_view>& w, std::size_t n, std::size_t line_no) {
  if (w.size() != n) throw TraceParseError(line_no, "expected " + std::to_string(n) + " fields");
}

}  // namespace

std::optional<Op> parse_op(std::string_view line, std::size_t line_no) {
  const auto w = split_words(line);
  if (w.empty() || w[0][0] == '#') return std::nullopt;
  if (w[0] == "i") {
    expect_words(w, 2, line_no);
    return Op::insert(parse_label(w[1], line_no));
  }
  if (w[0] == "m") {
    expect_words(w, 3, line_no);
    return Op::merge(parse_index(w[1], line_no), parse_index(w[2], line_no));
  }
  if (w[0] == "c") {
    expect_words(w, 2, line_no);
    return Op::cut(parse_index(w[1], line_no));
  }
  if (w[0] == "d") {
    expect_words(w, 2, line_no);
    return Op::erase(parse_index(w[1], line_no));
  }
  if (w[0] == "q" && w.size() >= 2) {
    if (w[1] == "root") {
      expect_words(w, 3, line_no);
      return Op::root(parse_index(w[2], line_no));
    }
    if (w[1] == "nca") {
      expect_words(w, 4, line_no);
      return Op::nca(parse_index(w[2], line_no), parse_index(w[3], line_no));
    }
    if (w[1] == "parent") {
      expect_words(w, 3, line_no);
      return Op::parent(parse_index(w[2], line_no));
    }
  }
  throw TraceParseError(line_no, "unknown operation '" + std::string(line) + "'");
}

Trace read_trace(std::istream& in) {
  Trace out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto op = parse_op(line, n)) out.push_back(*op);
  }
  return out;
}

std::string format_op(const Op& op) {
  std::ostringstream s;
  switch (op.kind) {
    case OpKind::insert: s.precision(17); s << "i " << op.label; break;
    case OpKind::merge: s << "m " << op.a << ' ' << op.b; break;
    case OpKind::cut: s << "c " << op.a; break;
    case OpKind::erase: s << "d " << op.a; break;
    case OpKind::root: s << "q root " << op.a; break;
    case OpKind::nca: s << "q nca " << op.a << ' ' << op.b; break;
    case OpKind::parent: s << "q parent " << op.a; break;
  }
  return s.str();
}

void write_trace(std::ostream& out, const Trace& trace) {
  for (const auto& op : trace) out << format_op(op) << '\n';
}

std::optional<NodeRef> apply(MergeableForest& forest, const Op& op) {
  const NodeRef a{op.a};
  const NodeRef b{op.b};
  switch (op.kind) {
    case OpKind::insert: forest.insert(op.label); return std::nullopt;
    case OpKind::merge: forest.merge(a, b); return std::nullopt;
    case OpKind::cut: forest.cut(a); return std::nullopt;
    case OpKind::erase: forest.erase(a); return std::nullopt;
    case OpKind::root: return forest.root(a);
    case OpKind::nca: return forest.nca(a, b);
    case OpKind::parent: return forest.parent(a);
  }
  return std::nullopt;
}

std::string format_answer(NodeRef r) { return "= " + to_string(r); }

void run_trace(MergeableForest& forest, const Trace& trace, std::ostream& out) {
  for (const auto& op : trace) {
    if (auto ans = apply(forest, op)) out << format_answer(*ans) << '\n';
  }
}

}  // namespace mergetree
