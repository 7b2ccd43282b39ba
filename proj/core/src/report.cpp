#include "mergetree/report.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <unordered_set>

#include "json.hpp"

namespace mergetree {

namespace {

struct CounterField {
  const char* name;
  std::uint64_t OpCounters::*field;
};

constexpr CounterField kCounterFields[] = {
    {"parent_changes", &OpCounters::parent_changes},
    {"merges", &OpCounters::merges},
    {"structural_merges", &OpCounters::structural_merges},
    {"merge_steps", &OpCounters::merge_steps},
    {"topmost_queries", &OpCounters::topmost_queries},
    {"topmost_cost", &OpCounters::topmost_cost},
    {"solid_insertions", &OpCounters::solid_insertions},
    {"solid_deletions", &OpCounters::solid_deletions},
    {"rank_increases", &OpCounters::rank_increases},
    {"shorter_path_nodes", &OpCounters::shorter_path_nodes},
};

BoundCheck make_check(std::string name, std::string formula, std::uint64_t observed, double limit,
                      double flag_above) {
  BoundCheck c{std::move(name), std::move(formula), observed, limit, flag_above, Verdict::pass};
  const auto x = static_cast<double>(observed);
  if (x > limit) {
    c.verdict = Verdict::fail;
  } else if (x > flag_above) {
    c.verdict = Verdict::flag;
  }
  return c;
}

}  // namespace

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::flag: return "flag";
    case Verdict::fail: return "fail";
  }
  return "?";
}

std::vector<BoundCheck> check_bounds(const BoundInputs& in) {
  std::vector<BoundCheck> out;
  const double n = static_cast<double>(in.n);
  const double m = static_cast<double>(in.m);
  const double lg = in.n > 1 ? std::log2(n) : 0.0;
  const auto& c = in.total;

  if (in.backend != Backend::implicit) {
    const double lim = 4 * m * (lg + 2);
    out.push_back(make_check("parent_changes", "4m(lg n + 2)", c.parent_changes, lim, lim));
    if (in.cut_free) {
      const double lim2 = 4 * (m + n * (lg + 2));
      out.push_back(make_check("parent_changes_cut_free", "4(m + n(lg n + 2))", c.parent_changes, lim2, lim2));
    }
  }
  if (in.backend == Backend::rank) {
    const double nlg = n * lg;
    out.push_back(make_check("rank_increases", "n lg n", c.rank_increases, nlg, nlg));
    out.push_back(make_check("solid_insertions", "n lg n", c.solid_insertions, nlg, nlg));
    out.push_back(make_check("solid_deletions", "n lg n", c.solid_deletions, nlg, nlg));
    const double steps = 4 * m * (lg + 2);
    out.push_back(make_check("merge_steps", "4m(lg n + 2)", c.merge_steps, steps, steps));
    out.push_back(make_check("topmost_cost", "8n(lg n + 2)", c.topmost_cost, 8 * n * (lg + 2), 4 * n * (lg + 2)));
  }
  if (in.leaf_phase && (in.backend == Backend::naive || in.backend == Backend::dyn)) {
    const double lm = static_cast<double>(in.leaf_merges);
    const double lim = lm + n * std::sqrt(lm);
    out.push_back(make_check("shorter_path_nodes", "m + n sqrt(m)", in.leaf_phase->shorter_path_nodes, lim, lim));
  }
  return out;
}

Verdict worst(const std::vector<BoundCheck>& checks) noexcept {
  Verdict v = Verdict::pass;
  for (const auto& c : checks) {
    if (c.verdict == Verdict::fail) return Verdict::fail;
    if (c.verdict == Verdict::flag) v = Verdict::flag;
  }
  return v;
}

BenchReport run_workload(const Workload& w, Backend backend, const ForestOptions& opts) {
  BenchReport r;
  r.workload = w.name;
  r.param = w.param;
  r.backend = std::string(to_string(backend));
  r.expected_parent_changes = w.expected_parent_changes;

  std::unordered_set<std::uint32_t> args;
  bool cut_free = true;
  for (const auto* phase : {&w.setup, &w.measured}) {
    for (const auto& op : *phase) {
      if (op.kind == OpKind::merge) {
        args.insert(op.a);
        args.insert(op.b);
        ++r.m;
      }
      if (op.kind == OpKind::cut) cut_free = false;
    }
  }
  r.n = args.size();

  auto forest = make_forest(backend, opts);
  for (const auto& op : w.setup) apply(*forest, op);
  const auto before = forest->counters();
  const auto start = std::chrono::steady_clock::now();
  for (const auto& op : w.measured) apply(*forest, op);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.total = forest->counters();
  r.counters = r.total - before;
  r.measured_merges = r.counters.merges;

  BoundInputs in;
  in.backend = backend;
  in.total = r.total;
  in.n = r.n;
  in.m = r.m;
  in.cut_free = cut_free;
  if (w.leaf_only) {
    in.leaf_phase = r.counters;
    in.leaf_merges = r.measured_merges;
  }
  r.checks = check_bounds(in);
  r.verdict = worst(r.checks);
  if (r.expected_parent_changes && backend != Backend::implicit &&
      r.counters.parent_changes != *r.expected_parent_changes) {
    r.verdict = Verdict::fail;
  }
  return r;
}

void write_text(std::ostream& out, const BenchReport& r) {
  out << "workload " << r.workload << " param " << r.param << " backend " << r.backend << '\n';
  out << "n " << r.n << " m " << r.m << " measured_merges " << r.measured_merges << " seconds " << r.seconds << '\n';
  for (const auto& f : kCounterFields) {
    out << "  " << f.name << ' ' << r.counters.*f.field << " (total " << r.total.*f.field << ")\n";
  }
  if (r.expected_parent_changes) out << "  expected_parent_changes " << *r.expected_parent_changes << '\n';
  for (const auto& c : r.checks) {
    out << "  check " << c.name << ": " << c.observed << " <= " << c.formula << " = " << c.limit << "  "
        << to_string(c.verdict) << '\n';
  }
  out << "verdict " << to_string(r.verdict) << '\n';
}

std::string to_json(const BenchReport& r) {
  nlohmann::ordered_json j;
  j["workload"] = r.workload;
  j["param"] = r.param;
  j["backend"] = r.backend;
  j["n"] = r.n;
  j["m"] = r.m;
  j["measured_merges"] = r.measured_merges;
  j["seconds"] = r.seconds;
  for (const auto& f : kCounterFields) j[f.name] = r.counters.*f.field;
  for (const auto& f : kCounterFields) j[std::string("total_") + f.name] = r.total.*f.field;
  j["expected_parent_changes"] = r.expected_parent_changes ? nlohmann::ordered_json(*r.expected_parent_changes)
                                                           : nlohmann::ordered_json(nullptr);
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"formula", c.formula},
                      {"observed", c.observed},
                      {"limit", c.limit},
                      {"verdict", to_string(c.verdict)}});
  }
  j["checks"] = std::move(checks);
  j["verdict"] = to_string(r.verdict);
  return j.dump();
}

}  // namespace mergetree
