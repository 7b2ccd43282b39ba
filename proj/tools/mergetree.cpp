#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mergetree/fuzz.hpp"
#include "mergetree/reeb.hpp"
#include "mergetree/report.hpp"
#include "mergetree/trace.hpp"
#include "mergetree/workloads.hpp"

using namespace mergetree;

namespace {

constexpr int kInvalidInput = 2;

Backend backend_or_throw(const std::string& s) {
  if (auto b = parse_backend(s)) return *b;
  throw CLI::ValidationError("--backend", "unknown backend '" + s + "'");
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

int run_pair(const std::string& input, const std::string& algo, const std::string& backend, bool require_connected) {
  ReebGraph g;
  try {
    auto in = open_input(input);
    g = read_reeb(in);
  } catch (const std::exception& e) {
    std::cerr << input << ": " << e.what() << '\n';
    return kInvalidInput;
  }
  if (auto v = validate(g); !v) {
    std::cerr << input << ": invalid graph: " << v.message << '\n';
    return kInvalidInput;
  }
  PairingOptions opts;
  opts.require_connected = require_connected;
  const bool two_pass = algo == "twopass";
  opts.backend = backend.empty() ? (two_pass ? Backend::implicit : Backend::rank) : backend_or_throw(backend);
  try {
    const auto p = two_pass ? pair_two_pass(g, opts) : pair_single_pass(g, opts);
    write_pairing(std::cout, p);
  } catch (const ReebError& e) {
    std::cerr << input << ": " << e.what() << '\n';
    return kInvalidInput;
  }
  return 0;
}

int run_bench(const std::string& workload, std::uint64_t param, const std::string& backend, const std::string& format,
              std::uint64_t seed) {
  const auto w = make_workload(workload, param, seed);
  const auto r = run_workload(w, backend_or_throw(backend));
  if (format == "json") {
    std::cout << to_json(r) << '\n';
  } else {
    write_text(std::cout, r);
  }
  return r.verdict == Verdict::fail ? 1 : 0;
}

std::vector<Backend> parse_backends(const std::string& list) {
  std::vector<Backend> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(backend_or_throw(item));
  }
  return out;
}

int run_fuzz(std::size_t ops, std::uint64_t seed, const std::string& cuts, const std::string& backends, bool audit,
             bool leaf_merges) {
  FuzzConfig cfg;
  cfg.ops = ops;
  cfg.seed = seed;
  cfg.cuts = cuts == "on";
  cfg.forest.audit = audit;
  cfg.leaf_merges = leaf_merges;
  if (!backends.empty()) cfg.backends = parse_backends(backends);
  const auto r = fuzz(cfg);
  std::cout << "seed " << seed << " ops " << r.trace.size() << " merges " << r.result.m << " queries "
            << r.result.queries << " n " << r.result.n << (r.result.leaf_only ? " leaf-only" : "") << '\n';
  std::cout << "backends";
  for (auto b : r.result.backends) std::cout << ' ' << to_string(b);
  std::cout << '\n';
  if (r.result.mismatch) {
    const auto& m = *r.result.mismatch;
    std::cout << "MISMATCH " << m.backend << " at op " << m.op_index << ": " << m.detail << '\n';
    std::cout << "reproducer (" << r.reproducer->size() << " ops):\n";
    write_trace(std::cout, *r.reproducer);
    return 1;
  }
  for (const auto& [b, checks] : r.checks) {
    for (const auto& c : checks) {
      std::cout << "  " << to_string(b) << ' ' << c.name << ' ' << c.observed << " <= " << c.limit << ' '
                << to_string(c.verdict) << '\n';
    }
  }
  std::cout << (r.ok() ? "ok" : "FAIL") << '\n';
  return r.ok() ? 0 : 1;
}

int run_sort(const std::string& input, const std::string& backend) {
  std::vector<double> values;
  try {
    auto in = open_input(input);
    std::string line;
    for (std::size_t no = 1; std::getline(in, line); ++no) {
      const auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      const auto e = line.find_last_not_of(" \t\r") + 1;
      double x{};
      const auto [p, ec] = std::from_chars(line.data() + b, line.data() + e, x);
      if (ec != std::errc() || p != line.data() + e) {
        throw std::runtime_error("line " + std::to_string(no) + ": bad number '" + line + "'");
      }
      values.push_back(x);
    }
  } catch (const std::exception& e) {
    std::cerr << input << ": " << e.what() << '\n';
    return kInvalidInput;
  }
  std::cout.precision(17);
  for (double x : sort_via_merge(values, backend_or_throw(backend))) std::cout << x << '\n';
  return 0;
}

int run_trace_file(const std::string& input, const std::string& backend) {
  Trace t;
  try {
    auto in = open_input(input);
    t = read_trace(in);
  } catch (const std::exception& e) {
    std::cerr << input << ": " << e.what() << '\n';
    return kInvalidInput;
  }
  auto f = make_forest(backend_or_throw(backend));
  run_trace(*f, t, std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mergeable heap-ordered forests and Reeb graph pairing"};
  app.require_subcommand(1);

  std::string input, algo = "single", backend, report = "text", workload, cuts = "off", backends;
  std::uint64_t param = 0, seed = 1;
  std::size_t ops = 1000;
  bool require_connected = false, audit = false, leaf_merges = false;

  auto* pair = app.add_subcommand("pair", "Pair the critical points of a Reeb graph");
  pair->add_option("--input", input, "Reeb graph file")->required();
  pair->add_option("--algo", algo)->check(CLI::IsMember({"single", "twopass"}));
  pair->add_option("--backend", backend, "naive|dyn|rank|implicit");
  pair->add_flag("--require-connected", require_connected);

  auto* bench = app.add_subcommand("bench", "Run a workload and report counters");
  bench->add_option("--workload", workload)->required()->check(CLI::IsMember({"fig6", "fig7", "interleave", "random"}));
  bench->add_option("--param", param, "k for fig6/fig7, n for interleave/random")->required();
  auto* bench_backend = bench->add_option("--backend", backend, "naive|dyn|rank|implicit");
  bench->add_option("--report", report)->check(CLI::IsMember({"text", "json"}));
  bench->add_option("--seed", seed, "random workload seed");

  auto* fz = app.add_subcommand("fuzz", "Differential test against the naive forest");
  fz->add_option("--ops", ops)->required();
  fz->add_option("--seed", seed)->required();
  fz->add_option("--cuts", cuts)->required()->check(CLI::IsMember({"on", "off"}));
  fz->add_option("--backends", backends, "comma-separated, default dyn,rank,implicit");
  fz->add_flag("--audit", audit, "audit backend internals after every op");
  fz->add_flag("--leaf-merges", leaf_merges, "merge only pairs of leaves");

  auto* srt = app.add_subcommand("sort", "Sort reals through merges");
  srt->add_option("--input", input, "one real per line")->required();
  auto* sort_backend = srt->add_option("--backend", backend, "parent-capable backend");

  auto* run = app.add_subcommand("run", "Run an op trace and print query answers");
  run->add_option("--input", input, "trace file")->required();
  auto* run_backend = run->add_option("--backend", backend);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*pair) return run_pair(input, algo, backend, require_connected);
    if (*bench) return run_bench(workload, param, bench_backend->count() ? backend : "rank", report, seed);
    if (*fz) {
      if (cuts == "on" && backends.empty()) backends = "dyn";
      return run_fuzz(ops, seed, cuts, backends, audit, leaf_merges);
    }
    if (*srt) return run_sort(input, sort_backend->count() ? backend : "rank");
    if (*run) return run_trace_file(input, run_backend->count() ? backend : "rank");
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
