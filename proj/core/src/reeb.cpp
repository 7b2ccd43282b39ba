#include "mergetree/reeb.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace mergetree {

namespace {

constexpr std::uint32_t kNone = NodeRef::kNullIndex;

struct DisjointSets {
  std::vector<std::uint32_t> up;
  explicit DisjointSets(std::size_t n) : up(n) { std::iota(up.begin(), up.end(), 0u); }
  std::uint32_t find(std::uint32_t v) {
    while (up[v] != v) v = up[v] = up[up[v]];
    return v;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) up[std::max(a, b)] = std::min(a, b);
  }
};

std::string vertex_name(std::uint32_t v) { return "vertex " + std::to_string(v); }

PairType type_for(VertexKind later, VertexKind earlier) {
  if (later == VertexKind::down_fork) return earlier == VertexKind::source ? PairType::b : PairType::a;
  return earlier == VertexKind::source ? PairType::d : PairType::c;
}

Pairing sorted(Pairing p) {
  std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
  return p;
}

void require_valid(const ReebGraph& g) {
  if (auto r = validate(g); !r) throw ReebError("invalid Reeb graph: " + r.message);
}

}  // namespace

char to_char(PairType t) noexcept {
  switch (t) {
    case PairType::a: return 'a';
    case PairType::b: return 'b';
    case PairType::c: return 'c';
    case PairType::d: return 'd';
  }
  return '?';
}

Adjacency adjacency(const ReebGraph& g) {
  Adjacency adj;
  adj.in.resize(g.size());
  adj.out.resize(g.size());
  for (const auto& [from, to] : g.arcs) {
    adj.out[from].push_back(to);
    adj.in[to].push_back(from);
  }
  return adj;
}

ValidationResult validate(const ReebGraph& g) {
  const auto n = g.size();
  if (n == 0) return {false, "graph has no vertices"};
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!std::isfinite(g.labels[i])) return {false, vertex_name(i) + " has a non-finite label"};
    if (i > 0 && !(g.labels[i - 1] < g.labels[i])) {
      return {false, vertex_name(i) + " label does not exceed the previous label"};
    }
  }
  std::vector<std::uint32_t> in(n, 0);
  std::vector<std::uint32_t> out(n, 0);
  for (std::size_t k = 0; k < g.arcs.size(); ++k) {
    const auto [from, to] = g.arcs[k];
    const auto arc = "arc " + std::to_string(from) + "->" + std::to_string(to);
    if (from >= n || to >= n) return {false, arc + " names a missing vertex"};
    if (from >= to) return {false, arc + " does not go forward in canonical order"};
    ++out[from];
    ++in[to];
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    const bool ok = (in[i] == 0 && out[i] == 1) || (in[i] == 1 && out[i] == 0) || (in[i] == 1 && out[i] == 2) ||
                    (in[i] == 2 && out[i] == 1);
    if (!ok) {
      return {false, vertex_name(i) + " has in-degree " + std::to_string(in[i]) + " and out-degree " +
                         std::to_string(out[i]) + ", not a source, sink, up-fork or down-fork"};
    }
  }
  // Open arcs crossing the sweep line.
  std::int64_t frontier = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    frontier += static_cast<std::int64_t>(out[i]) - static_cast<std::int64_t>(in[i]);
    if (frontier < 0) return {false, "sweep frontier negative after " + vertex_name(i)};
  }
  if (frontier != 0) return {false, "sweep ends with open arcs"};
  return {};
}

std::vector<VertexKind> vertex_kinds(const ReebGraph& g) {
  const auto adj = adjacency(g);
  std::vector<VertexKind> k(g.size());
  for (std::uint32_t i = 0; i < g.size(); ++i) {
    const auto in = adj.in[i].size();
    const auto out = adj.out[i].size();
    if (in == 0) {
      k[i] = VertexKind::source;
    } else if (out == 0) {
      k[i] = VertexKind::sink;
    } else if (out == 2) {
      k[i] = VertexKind::up_fork;
    } else {
      k[i] = VertexKind::down_fork;
    }
  }
  return k;
}

std::vector<std::uint32_t> components(const ReebGraph& g, std::uint32_t* count) {
  DisjointSets ds(g.size());
  for (const auto& [from, to] : g.arcs) ds.unite(from, to);
  std::vector<std::uint32_t> id(g.size());
  std::map<std::uint32_t, std::uint32_t> number;
  for (std::uint32_t i = 0; i < g.size(); ++i) {
    const auto r = ds.find(i);
    auto it = number.try_emplace(r, static_cast<std::uint32_t>(number.size())).first;
    id[i] = it->second;
  }
  if (count) *count = static_cast<std::uint32_t>(number.size());
  return id;
}

ReebGraph reversed(const ReebGraph& g) {
  const auto n = g.size();
  ReebGraph r;
  r.labels.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) r.labels[n - 1 - i] = -g.labels[i];
  r.arcs.reserve(g.arcs.size());
  for (const auto& [from, to] : g.arcs) r.arcs.emplace_back(n - 1 - to, n - 1 - from);
  return r;
}

ReebGraph generate_reeb(std::uint64_t seed, std::uint32_t n_target) {
  if (n_target < 2) throw std::invalid_argument("generate_reeb: n_target must be at least 2");
  const std::uint32_t n = n_target & ~1u;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> step(0.5, 1.5);
  auto pick = [&](std::size_t k) { return static_cast<std::size_t>(rng() % k); };

  ReebGraph g;
  g.labels.reserve(n);
  // Open arcs: the vertex they leave and the component they belong to.
  struct Open {
    std::uint32_t from;
    std::uint32_t comp;
  };
  std::vector<Open> open;
  std::vector<std::uint32_t> comp_arcs;  // open arcs per component id
  std::uint32_t live_comps = 0;
  double label = 0.0;

  enum Move { source, up_fork, down_fork, sink };
  for (std::uint32_t x = 0; x < n; ++x) {
    const auto remaining = n - x;  // including x
    const auto f = static_cast<std::uint32_t>(open.size());
    std::vector<Move> moves;
    // A +1 move must leave room to close every open arc afterwards.
    if (f + 2 <= remaining) {
      moves.push_back(source);
      if (f >= 1) moves.push_back(up_fork);
    }
    if (f >= 2) moves.push_back(down_fork);
    bool can_sink = false;
    if (f >= 1) {
      if (f == 1 && live_comps == 1) {
        can_sink = remaining == 1;
      } else {
        for (const auto& o : open) {
          if (comp_arcs[o.comp] >= 2) {
            can_sink = true;
            break;
          }
        }
      }
    }
    if (can_sink) moves.push_back(sink);
    if (moves.empty()) throw std::logic_error("generate_reeb: no feasible move");
    const auto mv = moves[pick(moves.size())];

    label += step(rng);
    g.labels.push_back(label);
    switch (mv) {
      case source: {
        const auto c = static_cast<std::uint32_t>(comp_arcs.size());
        comp_arcs.push_back(1);
        ++live_comps;
        open.push_back({x, c});
        break;
      }
      case up_fork: {
        const auto k = pick(open.size());
        const auto o = open[k];
        g.arcs.emplace_back(o.from, x);
        open[k] = {x, o.comp};
        open.push_back({x, o.comp});
        ++comp_arcs[o.comp];
        break;
      }
      case down_fork: {
        auto i = pick(open.size());
        auto j = pick(open.size() - 1);
        if (j >= i) ++j;
        if (i < j) std::swap(i, j);
        const auto a = open[i];
        const auto b = open[j];
        g.arcs.emplace_back(a.from, x);
        g.arcs.emplace_back(b.from, x);
        open.erase(open.begin() + static_cast<std::ptrdiff_t>(i));
        open.erase(open.begin() + static_cast<std::ptrdiff_t>(j));
        std::uint32_t keep = b.comp;
        if (a.comp != b.comp) {
          for (auto& o : open) {
            if (o.comp == a.comp) o.comp = keep;
          }
          comp_arcs[keep] += comp_arcs[a.comp];
          comp_arcs[a.comp] = 0;
          --live_comps;
        }
        comp_arcs[keep] -= 1;
        open.push_back({x, keep});
        break;
      }
      case sink: {
        std::vector<std::size_t> ok;
        for (std::size_t k = 0; k < open.size(); ++k) {
          if (comp_arcs[open[k].comp] >= 2 || (live_comps == 1 && open.size() == 1)) ok.push_back(k);
        }
        const auto k = ok[pick(ok.size())];
        const auto o = open[k];
        g.arcs.emplace_back(o.from, x);
        open.erase(open.begin() + static_cast<std::ptrdiff_t>(k));
        if (--comp_arcs[o.comp] == 0) --live_comps;
        break;
      }
    }
  }
  if (!open.empty()) throw std::logic_error("generate_reeb: arcs left open");
  if (auto r = validate(g); !r) throw std::logic_error("generate_reeb produced an invalid graph: " + r.message);
  return g;
}

Pairing pair_reference(const ReebGraph& g) {
  require_valid(g);
  const auto n = g.size();
  const auto adj = adjacency(g);
  const auto kind = vertex_kinds(g);
  std::vector<std::uint32_t> pred(n, kNone);
  std::vector<std::uint8_t> paired(n, 0);
  std::vector<std::uint8_t> deleted(n, 0);
  Pairing out;

  auto root_path = [&](std::uint32_t v) {
    std::vector<std::uint32_t> p;
    for (; v != kNone; v = pred[v]) p.push_back(v);
    return p;
  };
  auto check_invariants = [&](std::uint32_t upto) {
    std::vector<std::uint32_t> outdeg(n, 0);
    for (std::uint32_t q = 0; q <= upto; ++q) {
      if (!deleted[q] && pred[q] != kNone) ++outdeg[pred[q]];
    }
    for (const auto& [from, to] : g.arcs) {
      if (to > upto && from <= upto) ++outdeg[from];
    }
    for (std::uint32_t z = 0; z <= upto; ++z) {
      if (deleted[z]) continue;
      if (pred[z] != kNone && (pred[z] >= z || deleted[pred[z]])) {
        throw std::logic_error("reference sweep: predecessor order broken at " + vertex_name(z));
      }
      const auto in = pred[z] == kNone ? 0u : 1u;
      const bool expect = (in == 1 && outdeg[z] == 1) || (in == 0 && outdeg[z] == 0);
      if (expect != static_cast<bool>(paired[z])) {
        throw std::logic_error("reference sweep: paired status inconsistent at " + vertex_name(z));
      }
    }
  };

  for (std::uint32_t x = 0; x < n; ++x) {
    switch (kind[x]) {
      case VertexKind::source: break;
      case VertexKind::up_fork: pred[x] = adj.in[x][0]; break;
      case VertexKind::down_fork: {
        const auto v = adj.in[x][0];
        const auto w = adj.in[x][1];
        auto a = v;
        auto b = w;
        std::uint32_t y;
        while (true) {
          if (a == b) {
            y = a;
            break;
          }
          auto& larger = a > b ? a : b;
          if (pred[larger] == kNone) {
            y = larger;
            break;
          }
          larger = pred[larger];
        }
        out.push_back({x, y, type_for(VertexKind::down_fork, kind[y])});
        paired[x] = paired[y] = 1;
        auto s = root_path(v);
        const auto sw = root_path(w);
        s.insert(s.end(), sw.begin(), sw.end());
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        for (std::size_t i = 0; i < s.size(); ++i) pred[s[i]] = i == 0 ? kNone : s[i - 1];
        pred[x] = s.back();
        break;
      }
      case VertexKind::sink: {
        auto v = adj.in[x][0];
        pred[x] = v;
        deleted[x] = 1;
        while (paired[v]) {
          deleted[v] = 1;
          v = pred[v];
          if (v == kNone) throw std::logic_error("reference sweep: sink walk ran off the root");
        }
        out.push_back({x, v, type_for(VertexKind::sink, kind[v])});
        paired[x] = paired[v] = 1;
        break;
      }
    }
    check_invariants(x);
  }
  return sorted(std::move(out));
}

Pairing pair_single_pass(const ReebGraph& g, const PairingOptions& opts, PairingStats* stats) {
  require_valid(g);
  if (opts.require_connected) {
    std::uint32_t count = 0;
    components(g, &count);
    if (count > 1) throw ReebError("graph has " + std::to_string(count) + " connected components");
  }
  const auto n = g.size();
  const auto adj = adjacency(g);
  const auto kind = vertex_kinds(g);
  auto forest = make_forest(opts.backend, opts.forest);
  if (!forest->capability().supports_parent) {
    throw UnsupportedOperation("single-pass pairing needs parent; backend " + std::string(forest->name()) +
                               " lacks it");
  }
  std::vector<std::uint8_t> paired(n, 0);
  std::uint64_t walk = 0;
  Pairing out;
  auto node = [](std::uint32_t v) { return NodeRef{v}; };

  for (std::uint32_t x = 0; x < n; ++x) {
    forest->insert(g.labels[x]);
    switch (kind[x]) {
      case VertexKind::source: break;
      case VertexKind::up_fork: forest->merge(node(x), node(adj.in[x][0])); break;
      case VertexKind::down_fork: {
        const auto v = node(adj.in[x][0]);
        const auto w = node(adj.in[x][1]);
        const auto rv = forest->root(v);
        const auto rw = forest->root(w);
        const auto y = rv != rw ? std::max(rv, rw) : forest->nca(v, w);
        out.push_back({x, y.index, type_for(VertexKind::down_fork, kind[y.index])});
        paired[x] = paired[y.index] = 1;
        forest->merge(node(x), v);
        forest->merge(node(x), w);
        break;
      }
      case VertexKind::sink: {
        auto v = node(adj.in[x][0]);
        forest->merge(node(x), v);
        while (paired[v.index]) {
          v = forest->parent(v);
          ++walk;
          if (v.is_null()) throw std::logic_error("single-pass pairing: sink walk ran off the root");
        }
        out.push_back({x, v.index, type_for(VertexKind::sink, kind[v.index])});
        paired[x] = paired[v.index] = 1;
        break;
      }
    }
  }
  if (walk > n) throw std::logic_error("single-pass pairing: sink walks exceeded the vertex count");
  if (stats) {
    stats->sink_walk_steps = walk;
    stats->forward = forest->counters();
  }
  return sorted(std::move(out));
}

namespace {

// The sweep without parent walks: a sink only merges. Returns the down-fork
// pairs.
Pairing streamlined_sweep(const ReebGraph& g, const PairingOptions& opts, OpCounters* counters) {
  const auto adj = adjacency(g);
  const auto kind = vertex_kinds(g);
  auto forest = make_forest(opts.backend, opts.forest);
  Pairing out;
  for (std::uint32_t x = 0; x < g.size(); ++x) {
    forest->insert(g.labels[x]);
    const NodeRef nx{x};
    switch (kind[x]) {
      case VertexKind::source: break;
      case VertexKind::up_fork:
      case VertexKind::sink: forest->merge(nx, NodeRef{adj.in[x][0]}); break;
      case VertexKind::down_fork: {
        const NodeRef v{adj.in[x][0]};
        const NodeRef w{adj.in[x][1]};
        const auto rv = forest->root(v);
        const auto rw = forest->root(w);
        const auto y = rv != rw ? std::max(rv, rw) : forest->nca(v, w);
        out.push_back({x, y.index, type_for(VertexKind::down_fork, kind[y.index])});
        forest->merge(nx, v);
        forest->merge(nx, w);
        break;
      }
    }
  }
  if (counters) *counters = forest->counters();
  return out;
}

}  // namespace

Pairing pair_two_pass(const ReebGraph& g, PairingOptions opts, PairingStats* stats) {
  require_valid(g);
  const auto n = g.size();
  std::uint32_t count = 0;
  const auto comp = components(g, &count);
  if (opts.require_connected && count > 1) {
    throw ReebError("graph has " + std::to_string(count) + " connected components");
  }

  Pairing out;
  std::vector<std::uint32_t> first(count, kNone);
  std::vector<std::uint32_t> last(count, kNone);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (first[comp[v]] == kNone) first[comp[v]] = v;
    last[comp[v]] = v;
  }
  for (std::uint32_t c = 0; c < count; ++c) out.push_back({last[c], first[c], PairType::d});

  OpCounters fwd;
  OpCounters rev;
  auto forward = streamlined_sweep(g, opts, &fwd);
  out.insert(out.end(), forward.begin(), forward.end());
  for (const auto& p : streamlined_sweep(reversed(g), opts, &rev)) {
    out.push_back({n - 1 - p.y, n - 1 - p.x, p.type == PairType::b ? PairType::c : p.type});
  }

  out = sorted(std::move(out));
  Pairing unique;
  for (const auto& p : out) {
    if (!unique.empty() && unique.back().x == p.x) {
      if (!(unique.back() == p)) {
        throw std::logic_error("two-pass pairing: passes disagree on " + vertex_name(p.x));
      }
      continue;
    }
    unique.push_back(p);
  }
  if (stats) {
    stats->forward = fwd;
    stats->reverse = rev;
  }
  return unique;
}

ValidationResult check_pairing(const ReebGraph& g, const Pairing& p) {
  const auto n = g.size();
  const auto kind = vertex_kinds(g);
  std::uint32_t count = 0;
  const auto comp = components(g, &count);
  std::vector<std::uint32_t> seen(n, 0);
  std::vector<std::uint32_t> d_pairs(count, 0);
  for (const auto& q : p) {
    if (q.x >= n || q.y >= n) return {false, "pair names a missing vertex"};
    if (q.y >= q.x) return {false, "pair (" + std::to_string(q.x) + "," + std::to_string(q.y) + ") is not ordered"};
    ++seen[q.x];
    ++seen[q.y];
    if (type_for(kind[q.x], kind[q.y]) != q.type || kind[q.x] == VertexKind::source ||
        kind[q.x] == VertexKind::up_fork || kind[q.y] == VertexKind::sink || kind[q.y] == VertexKind::down_fork) {
      return {false, "pair (" + std::to_string(q.x) + "," + std::to_string(q.y) + ") has the wrong type"};
    }
    if (q.type == PairType::d) {
      if (comp[q.x] != comp[q.y]) return {false, "type-d pair spans two components"};
      ++d_pairs[comp[q.x]];
    }
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    if (seen[v] != 1) return {false, vertex_name(v) + " appears in " + std::to_string(seen[v]) + " pairs"};
  }
  for (std::uint32_t c = 0; c < count; ++c) {
    if (d_pairs[c] != 1) return {false, "component " + std::to_string(c) + " has " + std::to_string(d_pairs[c]) + " type-d pairs"};
  }
  return {};
}

}  // namespace mergetree
