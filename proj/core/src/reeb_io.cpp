#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "mergetree/reeb.hpp"

namespace mergetree {

namespace {

template <typename T>
T number(std::string_view w, std::size_t line, const char* what) {
  T x{};
  const auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), x);
  if (ec != std::errc() || p != w.data() + w.size()) {
    throw ReebFormatError(line, std::string("bad ") + what + " '" + std::string(w) + "'");
  }
  return x;
}

}  // namespace

ReebGraph read_reeb(std::istream& in) {
  ReebGraph g;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::uint32_t n = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> w;
    for (std::string t; ss >> t;) w.push_back(t);
    if (w.empty()) continue;
    if (!header) {
      if (w.size() != 2 || w[0] != "reeb") throw ReebFormatError(line_no, "expected 'reeb <n>'");
      n = number<std::uint32_t>(w[1], line_no, "vertex count");
      header = true;
      continue;
    }
    if (w[0] == "v") {
      if (w.size() != 3) throw ReebFormatError(line_no, "expected 'v <index> <label>'");
      const auto idx = number<std::uint32_t>(w[1], line_no, "vertex index");
      if (idx != g.labels.size()) {
        throw ReebFormatError(line_no, "vertex " + std::to_string(idx) + " out of order, expected " +
                                           std::to_string(g.labels.size()));
      }
      if (idx >= n) throw ReebFormatError(line_no, "more vertices than declared");
      g.labels.push_back(number<double>(w[2], line_no, "label"));
    } else if (w[0] == "a") {
      if (w.size() != 3) throw ReebFormatError(line_no, "expected 'a <from> <to>'");
      g.arcs.emplace_back(number<std::uint32_t>(w[1], line_no, "arc end"), number<std::uint32_t>(w[2], line_no, "arc end"));
    } else {
      throw ReebFormatError(line_no, "unknown record '" + w[0] + "'");
    }
  }
  if (!header) throw ReebFormatError(line_no, "missing 'reeb <n>' header");
  if (g.labels.size() != n) {
    throw ReebFormatError(line_no, "declared " + std::to_string(n) + " vertices, found " + std::to_string(g.labels.size()));
  }
  return g;
}

void write_reeb(std::ostream& out, const ReebGraph& g) {
  const auto old = out.precision(17);
  out << "reeb " << g.size() << '\n';
  for (std::uint32_t i = 0; i < g.size(); ++i) out << "v " << i << ' ' << g.labels[i] << '\n';
  for (const auto& [from, to] : g.arcs) out << "a " << from << ' ' << to << '\n';
  out.precision(old);
}

void write_pairing(std::ostream& out, const Pairing& p) {
  for (const auto& q : p) out << "p " << q.x << ' ' << q.y << ' ' << to_char(q.type) << '\n';
}

}  // namespace mergetree
