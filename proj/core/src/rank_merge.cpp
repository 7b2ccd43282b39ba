#include "mergetree/rank_merge.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

namespace mergetree {

namespace {

std::uint32_t floor_lg(std::uint64_t x) noexcept { return static_cast<std::uint32_t>(std::bit_width(x) - 1); }

std::uint32_t ceil_lg(std::uint64_t x) noexcept {
  return x <= 1 ? 0 : static_cast<std::uint32_t>(std::bit_width(x - 1));
}

[[noreturn]] void broken(const std::string& what) { throw std::logic_error("rank merge: " + what); }

}  // namespace

RankMergeForest::RankMergeForest(const ForestOptions& opts)
    : rebuild_on_halving_(opts.rebuild_on_halving), audit_(opts.audit) {}

std::uint32_t RankMergeForest::new_header(std::uint32_t top, std::uint32_t rank, std::uint32_t top_size) {
  std::uint32_t h;
  if (!free_headers_.empty()) {
    h = free_headers_.back();
    free_headers_.pop_back();
  } else {
    h = static_cast<std::uint32_t>(headers_.size());
    headers_.emplace_back();
    visits_[0].emplace_back();
    visits_[1].emplace_back();
  }
  headers_[h] = Header{top, kNil, rank, top_size, false};
  return h;
}

void RankMergeForest::retire_header(std::uint32_t h) {
  headers_[h].free = true;
  headers_[h].top = kNil;
  // Visit records may still name this header until the merge ends.
  if (merging_) {
    retired_.push_back(h);
  } else {
    free_headers_.push_back(h);
  }
}

void RankMergeForest::move_node(std::uint32_t node, std::uint32_t from, std::uint32_t to) {
  seq_.erase(headers_[from].seq, node);
  seq_.insert(headers_[to].seq, node);
  hdr_[node] = to;
  ++counters_.solid_deletions;
  ++counters_.solid_insertions;
}

void RankMergeForest::do_insert(std::uint32_t v) {
  parent_.push_back(kNil);
  solid_.push_back(kNil);
  d_.push_back(1);
  live_children_.push_back(0);
  in_structure_.push_back(1);
  tomb_.push_back(0);
  seq_.add_node(key_at(v));
  hdr_.push_back(new_header(v, 0, 1));
  seq_.insert(headers_[hdr_[v]].seq, v);
  ++structure_nodes_;
  ++structure_live_;
}

void RankMergeForest::visit(int side, std::uint32_t node, std::uint32_t from) {
  Visit& rec = visits_[side][hdr_[node]];
  if (rec.stamp == stamp_) return;
  rec.stamp = stamp_;
  rec.bottom = node;
  rec.below = from;
}

RankMergeForest::Walk RankMergeForest::traverse(std::uint32_t a, std::uint32_t b) {
  ++stamp_;
  Walk wk{{a, b}, kNil, 0};
  visit(0, a, kNil);
  visit(1, b, kNil);
  while (true) {
    const auto h = hdr_[wk.cur[0]];
    if (h == hdr_[wk.cur[1]]) {
      // A side may have jumped past its entry point to the path top.
      wk.answer = min_of(visits_[0][h].bottom, visits_[1][h].bottom);
      return wk;
    }
    const int k = less(wk.cur[0], wk.cur[1]) ? 1 : 0;
    const auto c = wk.cur[k];
    const auto top = headers_[hdr_[c]].top;
    const auto next = top != c ? top : parent_[c];
    if (next == kNil) {
      // A root is the minimum of its tree, so the other side is elsewhere;
      // walk it up as well so that merge sees both roots.
      const int o = 1 - k;
      while (true) {
        const auto co = wk.cur[o];
        const auto to = headers_[hdr_[co]].top;
        const auto no = to != co ? to : parent_[co];
        if (no == kNil) return wk;
        wk.cur[o] = no;
        ++wk.steps;
        visit(o, no, co);
      }
    }
    wk.cur[k] = next;
    ++wk.steps;
    visit(k, next, c);
  }
}

std::uint32_t RankMergeForest::do_root(std::uint32_t v) { return root_with_steps(NodeRef{v}).node.index; }

RankMergeForest::Steps RankMergeForest::root_with_steps(NodeRef v) {
  if (!is_live(v)) throw InvalidHandle("unknown or deleted node " + to_string(v));
  Steps out;
  auto c = v.index;
  while (true) {
    const auto top = headers_[hdr_[c]].top;
    const auto next = top != c ? top : parent_[c];
    if (next == kNil) break;
    c = next;
    ++out.steps;
  }
  out.node = NodeRef{c};
  return out;
}

std::uint32_t RankMergeForest::do_nca(std::uint32_t v, std::uint32_t w) { return traverse(v, w).answer; }

RankMergeForest::Steps RankMergeForest::nca_with_steps(NodeRef v, NodeRef w) {
  if (!is_live(v) || !is_live(w)) throw InvalidHandle("unknown or deleted node");
  const auto wk = traverse(v.index, w.index);
  return {NodeRef{wk.answer}, wk.steps};
}

std::uint32_t RankMergeForest::do_parent(std::uint32_t v) { return parent_[v]; }

std::uint32_t RankMergeForest::topmost_query(std::uint32_t y, std::uint32_t x) {
  const auto& h = headers_[hdr_[y]];
  const auto t = seq_.first_greater(h.seq, key_at(x));
  ++counters_.topmost_queries;
  if (t != kNil) {
    const auto span = seq_.position(h.seq, t) - seq_.position(h.seq, y);
    counters_.topmost_cost += ceil_lg(span);
  }
  return t;
}

NodeRef RankMergeForest::topmost_solid(NodeRef v, const Key& threshold) {
  if (!is_live(v)) throw InvalidHandle("unknown or deleted node " + to_string(v));
  const auto& h = headers_[hdr_[v.index]];
  const auto t = seq_.first_greater(h.seq, threshold);
  ++counters_.topmost_queries;
  if (t == kNil) return NodeRef::null();
  counters_.topmost_cost += ceil_lg(seq_.position(h.seq, t));
  return NodeRef{t};
}

void RankMergeForest::do_merge(std::uint32_t v, std::uint32_t w) {
  const auto wk = traverse(v, w);
  const auto u = wk.answer;
  if (u == v || u == w) return;

  std::uint32_t x;
  std::uint32_t y;
  if (u == kNil) {
    x = wk.cur[0];
    y = wk.cur[1];
  } else {
    auto child_of_u = [&](int k) {
      const Visit& rec = visits_[k][hdr_[u]];
      return rec.bottom == u ? rec.below : solid_[u];
    };
    x = child_of_u(0);
    y = child_of_u(1);
    if (audit_ && (parent_[x] != u || parent_[y] != u)) broken("initial nodes are not children of the nca");
  }
  int wside = 1;
  if (less(x, y)) {
    std::swap(x, y);
    std::swap(v, w);
    wside = 0;
  }

  merging_ = true;
  while (less(x, w) || hdr_[w] != hdr_[y]) {
    ++counters_.merge_steps;
    const Visit& rec = visits_[wside][hdr_[y]];
    if (rec.stamp != stamp_) broken("no visit recorded on the current path");
    const auto s = rec.bottom;
    std::uint32_t t;
    std::uint32_t z;
    if (less(x, s)) {
      t = topmost_query(y, x);
      z = parent_[t];
    } else {
      t = rec.below;
      z = s;
    }
    if (t == kNil) broken("merge step found no node below the current path");
    reparent(x, y, z);
    if (less(x, t)) {
      y = x;
      x = t;
      std::swap(v, w);
      wside ^= 1;
    } else {
      // x belongs below t as well: keep descending along w's side.
      y = t;
    }
  }
  reparent(x, y, w);
  counters_.parent_changes += moved_;
  moved_ = 0;
  last_moved_ = kNil;
  merging_ = false;
  for (auto h : retired_) free_headers_.push_back(h);
  retired_.clear();
  maybe_audit();
}

void RankMergeForest::reparent(std::uint32_t x, std::uint32_t y, std::uint32_t z) {
  const auto op = parent_[x];
  if (op != kNil && solid_[op] == x) {
    solid_case(x, op, y, z);
  } else {
    dashed_case(x, op, y, z);
  }
  if (op != kNil) --live_children_[op];
  ++live_children_[z];
  if (x != last_moved_) ++moved_;
  last_moved_ = x;
}

// x is the solid child of op, y a dashed child. Every node of y's path from y
// down to z gains at least size(x) and so reaches rank(op): the segment joins
// op's path between op and x, and the rest of y's path hangs from z.
void RankMergeForest::solid_case(std::uint32_t x, std::uint32_t op, std::uint32_t y, std::uint32_t z) {
  const auto hop = hdr_[op];
  const auto hy = hdr_[y];
  if (headers_[hy].top != y) broken("sibling of a solid child is not a path top");
  const auto r = headers_[hop].rank;
  const auto ry = headers_[hy].rank;
  if (ry >= r) broken("dashed sibling does not have lower rank");

  const auto size_y = headers_[hy].top_size;
  scratch_.clear();
  auto cur = y;
  auto sz = size_y;
  while (true) {
    scratch_.push_back({cur, 0, r});
    if (cur == z) break;
    sz -= d_[cur];
    cur = solid_[cur];
    if (cur == kNil) broken("new parent is not on the sibling's path");
  }
  const auto c = solid_[z];
  const auto size_c = sz - d_[z];

  d_[op] -= size_y;
  if (c != kNil) d_[z] += size_c;
  for (const auto& it : scratch_) {
    move_node(it.node, hy, hop);
    counters_.rank_increases += r - ry;
  }
  solid_[op] = y;
  solid_[z] = x;
  parent_[x] = z;
  if (c != kNil) {
    headers_[hy].top = c;
    headers_[hy].top_size = size_c;
  } else {
    retire_header(hy);
  }
}

// x is a path top (dashed child of op, or a root when op is null).
void RankMergeForest::dashed_case(std::uint32_t x, std::uint32_t op, std::uint32_t y, std::uint32_t z) {
  const auto hx = hdr_[x];
  const auto hy = hdr_[y];
  if (headers_[hx].top != x) broken("dashed node is not a path top");
  const auto sx = headers_[hx].top_size;
  const auto rx = headers_[hx].rank;

  if (op != kNil && solid_[op] == y) {
    // y continues op's path, so the sizes from y down to z grow but cannot
    // pass rank(op).
    if (rx >= headers_[hy].rank) broken("dashed child reaches its parent's rank");
    d_[op] -= sx;
    d_[z] += sx;
    parent_[x] = z;
    return;
  }

  if (headers_[hy].top != y) broken("sibling is neither solid child nor path top");
  const auto ry = headers_[hy].rank;
  const auto size_y = headers_[hy].top_size;

  // Walk down from y with the new sizes until the first node whose rank
  // stays put.
  scratch_.clear();
  std::uint32_t a = kNil;
  std::uint32_t a_size = 0;
  {
    auto cur = y;
    auto sz = size_y;
    bool grows = true;
    while (true) {
      const auto nsz = grows ? sz + sx : sz;
      const auto nr = floor_lg(nsz);
      if (nr == ry) {
        a = cur;
        a_size = nsz;
        break;
      }
      scratch_.push_back({cur, nsz, nr});
      if (cur == z) grows = false;
      const auto next = solid_[cur];
      if (next == kNil) break;
      sz -= d_[cur];
      cur = next;
    }
  }

  if (scratch_.empty()) {
    if (rx >= ry) broken("dashed attach would need a solid arc without a rank change");
    d_[z] += sx;
    headers_[hy].top_size += sx;
    parent_[x] = z;
    // op keeps y as a dashed child whose size absorbed x: d(op) is unchanged.
    return;
  }

  const bool op_join = op != kNil && scratch_.front().rank == headers_[hdr_[op]].rank;
  const bool x_join = scratch_.back().node == z && scratch_.back().rank == rx;
  if (op_join && x_join && scratch_.front().rank == scratch_.back().rank) {
    broken("path would join both its parent and the moved node");
  }
  if (op_join && solid_[op] != kNil) broken("parent already has a solid child");

  int flips = op_join ? 1 : 0;
  for (std::size_t i = 0; i + 1 < scratch_.size(); ++i) {
    if (scratch_[i].rank != scratch_[i + 1].rank) ++flips;
  }
  if (a != kNil) ++flips;
  if (flips > 3) broken("more than three arcs changed type");

  for (const auto& it : scratch_) {
    seq_.erase(headers_[hy].seq, it.node);
    ++counters_.solid_deletions;
    counters_.rank_increases += it.rank - ry;
  }

  std::uint32_t target = kNil;
  for (std::size_t i = 0; i < scratch_.size(); ++i) {
    const auto& it = scratch_[i];
    if (i == 0 || it.rank != scratch_[i - 1].rank) {
      const bool last_run = scratch_.back().rank == it.rank;
      if (i == 0 && op_join) {
        target = hdr_[op];
      } else if (last_run && x_join) {
        target = hx;
        headers_[hx].top = it.node;
        headers_[hx].top_size = it.size;
      } else {
        target = new_header(it.node, it.rank, it.size);
      }
    }
    hdr_[it.node] = target;
    seq_.insert(headers_[target].seq, it.node);
    ++counters_.solid_insertions;
  }

  for (std::size_t i = 0; i < scratch_.size(); ++i) {
    const auto node = scratch_[i].node;
    if (i + 1 < scratch_.size() && scratch_[i + 1].rank == scratch_[i].rank) {
      solid_[node] = scratch_[i + 1].node;
    } else if (i + 1 < scratch_.size()) {
      solid_[node] = kNil;
      d_[node] += scratch_[i + 1].size;
    } else if (node == z && x_join) {
      solid_[node] = x;
    } else {
      solid_[node] = kNil;
      if (a != kNil) d_[node] += a_size;
    }
  }
  // z's old solid child is a; it turned dashed.
  if (x_join && a != kNil) d_[z] += a_size;
  if (!x_join) d_[z] += sx;

  if (op_join) {
    d_[op] -= sx + size_y;
    solid_[op] = y;
  }
  parent_[x] = z;

  if (a != kNil) {
    headers_[hy].top = a;
    headers_[hy].top_size = a_size;
  } else {
    retire_header(hy);
  }
}

void RankMergeForest::do_erase(std::uint32_t v) {
  if (live_children_[v] != 0) {
    throw PreconditionViolation("delete: node " + std::to_string(v) + " is not a leaf");
  }
  tomb_[v] = 1;
  --structure_live_;
  if (parent_[v] != kNil) --live_children_[parent_[v]];
  if (rebuild_on_halving_ && 2 * structure_live_ <= structure_nodes_) {
    rebuild();
  }
  maybe_audit();
}

void RankMergeForest::rebuild() {
  ++rebuilds_;
  const auto n = static_cast<std::uint32_t>(parent_.size());
  std::vector<std::uint32_t> order;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (!in_structure_[v]) continue;
    if (tomb_[v]) {
      in_structure_[v] = 0;
      parent_[v] = kNil;
      continue;
    }
    order.push_back(v);
  }
  // Descending keys put every child before its parent.
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return less(b, a); });
  std::vector<std::uint32_t> size(n, 0);
  for (auto v : order) size[v] += 1;
  for (auto v : order) {
    if (parent_[v] != kNil) size[parent_[v]] += size[v];
  }
  for (auto v : order) {
    solid_[v] = kNil;
    d_[v] = 1;
    live_children_[v] = 0;
  }
  for (auto v : order) {
    const auto p = parent_[v];
    if (p == kNil) continue;
    ++live_children_[p];
    if (floor_lg(size[v]) == floor_lg(size[p])) {
      solid_[p] = v;
    } else {
      d_[p] += size[v];
    }
  }

  headers_.clear();
  free_headers_.clear();
  visits_[0].clear();
  visits_[1].clear();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto v = *it;
    const auto p = parent_[v];
    if (p != kNil && solid_[p] == v) {
      hdr_[v] = hdr_[p];
    } else {
      hdr_[v] = new_header(v, floor_lg(size[v]), size[v]);
    }
    seq_.insert(headers_[hdr_[v]].seq, v);
  }
  structure_nodes_ = structure_live_ = static_cast<std::uint32_t>(order.size());
}

std::uint32_t RankMergeForest::rank(NodeRef v) const {
  if (!is_live(v)) throw InvalidHandle("unknown or deleted node " + to_string(v));
  return headers_[hdr_[v.index]].rank;
}

NodeRef RankMergeForest::solid_child(NodeRef v) const {
  if (!is_live(v)) throw InvalidHandle("unknown or deleted node " + to_string(v));
  return NodeRef{solid_[v.index]};
}

std::vector<NodeRef> RankMergeForest::solid_path(NodeRef v) const {
  if (!is_live(v)) throw InvalidHandle("unknown or deleted node " + to_string(v));
  std::vector<NodeRef> out;
  for (auto c = headers_[hdr_[v.index]].top; c != kNil; c = solid_[c]) out.push_back(NodeRef{c});
  return out;
}

std::vector<NodeRef> RankMergeForest::parent_map() const {
  std::vector<NodeRef> out(parent_.size());
  for (std::size_t i = 0; i < parent_.size(); ++i) {
    if (alive(static_cast<std::uint32_t>(i))) out[i] = NodeRef{parent_[i]};
  }
  return out;
}

void RankMergeForest::maybe_audit() const {
  if (audit_) audit();
}

void RankMergeForest::audit() const {
  const auto n = static_cast<std::uint32_t>(parent_.size());
  std::vector<std::uint32_t> order;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (in_structure_[v]) order.push_back(v);
  }
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return less(b, a); });
  std::vector<std::uint64_t> size(n, 0);
  std::vector<std::uint64_t> dashed(n, 1);
  std::vector<std::uint32_t> solid_count(n, 0);
  for (auto v : order) size[v] += 1;
  for (auto v : order) {
    const auto p = parent_[v];
    if (p == kNil) continue;
    // Deleted nodes only ever have deleted descendants.
    if (!in_structure_[p] || (tomb_[p] && !tomb_[v])) broken("node " + std::to_string(v) + " hangs from a deleted node");
    if (!less(p, v)) broken("heap order violated at " + std::to_string(v));
    size[p] += size[v];
  }
  for (auto v : order) {
    const auto p = parent_[v];
    const auto& h = headers_.at(hdr_[v]);
    if (h.free) broken("node " + std::to_string(v) + " points to a free header");
    if (h.rank != floor_lg(size[v])) broken("rank mismatch at " + std::to_string(v));
    if (p == kNil) continue;
    const bool equal = floor_lg(size[v]) == floor_lg(size[p]);
    if (equal != (solid_[p] == v)) broken("solid arc classification wrong at " + std::to_string(v));
    if (equal) {
      ++solid_count[p];
      if (hdr_[p] != hdr_[v]) broken("solid arc crosses headers at " + std::to_string(v));
    } else {
      dashed[p] += size[v];
    }
  }
  for (auto v : order) {
    if (solid_count[v] > 1) broken("two solid children at " + std::to_string(v));
    if (solid_[v] != kNil && parent_[solid_[v]] != v) broken("solid child is not a child at " + std::to_string(v));
    if (d_[v] != dashed[v]) broken("dashed size wrong at " + std::to_string(v));
    if (solid_[v] != kNil && size[solid_[v]] != size[v] - d_[v]) {
      broken("size equation fails below " + std::to_string(v));
    }
    const auto& h = headers_[hdr_[v]];
    const bool is_top = parent_[v] == kNil || solid_[parent_[v]] != v;
    if (is_top != (h.top == v)) broken("header top wrong for " + std::to_string(v));
    if (is_top) {
      if (h.top_size != size[v]) broken("stored top size wrong at " + std::to_string(v));
      std::vector<std::uint32_t> walk;
      for (auto c = v; c != kNil; c = solid_[c]) walk.push_back(c);
      if (seq_.to_vector(h.seq) != walk) broken("path sequence out of order for top " + std::to_string(v));
    }
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    if (in_structure_[v] && live_children_[v] != 0 && tomb_[v]) broken("deleted node has children");
  }
}

}  // namespace mergetree
