#include "mergetree/workloads.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

namespace mergetree {

Workload workload_fig6(std::uint32_t k) {
  if (k < 1) throw std::invalid_argument("fig6: k must be at least 1");
  Workload w;
  w.name = "fig6";
  w.param = k;
  const std::uint32_t n = 2 * k + 1;
  for (std::uint32_t x = 0; x < n; ++x) w.setup.push_back(Op::insert(x));
  for (std::uint32_t x = 1; x < n; ++x) w.setup.push_back(Op::merge(x, 0));
  for (std::uint32_t j = 1; j <= k; ++j) {
    for (std::uint32_t i = 1; i <= k; ++i) w.measured.push_back(Op::merge(k + i, j));
  }
  return w;
}

Workload workload_fig7(std::uint32_t k) {
  const auto s = static_cast<std::uint32_t>(std::lround(std::sqrt(static_cast<double>(k))));
  if (k < 4 || s * s != k) throw std::invalid_argument("fig7: k must be a perfect square >= 4");
  Workload w;
  w.name = "fig7";
  w.param = k;
  w.leaf_only = true;
  const std::uint32_t n = 2 * k + 1;
  for (std::uint32_t x = 0; x < n; ++x) w.setup.push_back(Op::insert(x));
  for (std::uint32_t j = 1; j <= k; ++j) w.setup.push_back(Op::merge(j, j - 1));
  for (std::uint32_t i = 1; i <= k; ++i) w.setup.push_back(Op::merge(k + i, i));
  for (std::uint32_t i = 1; i + s <= k; ++i) w.measured.push_back(Op::merge(k + i, k + s + i));
  return w;
}

std::uint64_t interleave_parent_changes(std::uint32_t n) {
  std::uint64_t total = 0;
  for (std::uint64_t block = 2; block <= n; block *= 2) total += (n / block) * (block - 1);
  return total;
}

Workload workload_interleave(std::uint32_t n) {
  if (n < 2 || !std::has_single_bit(n)) throw std::invalid_argument("interleave: n must be a power of two >= 2");
  Workload w;
  w.name = "interleave";
  w.param = n;
  w.leaf_only = true;
  w.expected_parent_changes = interleave_parent_changes(n);
  // Node with label x has index x-1; the deepest node of residue class c
  // (1 <= c <= M) is the largest label congruent to c modulo M.
  for (std::uint32_t x = 1; x <= n; ++x) w.setup.push_back(Op::insert(x));
  for (std::uint32_t m = n; m >= 2; m /= 2) {
    for (std::uint32_t c = 1; c <= m / 2; ++c) {
      const auto a = n - m + c;
      const auto b = a + m / 2;
      w.measured.push_back(Op::merge(a - 1, b - 1));
    }
  }
  return w;
}

Workload workload_random(std::uint32_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random: n must be at least 1");
  Workload w;
  w.name = "random";
  w.param = n;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> label(0.0, 1.0);
  for (std::uint32_t x = 0; x < n; ++x) w.setup.push_back(Op::insert(label(rng)));
  for (std::uint32_t i = 0; i < 2 * n; ++i) {
    w.measured.push_back(Op::merge(static_cast<std::uint32_t>(rng() % n), static_cast<std::uint32_t>(rng() % n)));
  }
  return w;
}

Workload make_workload(std::string_view name, std::uint64_t param, std::uint64_t seed) {
  if (param > 1u << 26) throw std::invalid_argument("workload parameter too large");
  const auto p = static_cast<std::uint32_t>(param);
  if (name == "fig6") return workload_fig6(p);
  if (name == "fig7") return workload_fig7(p);
  if (name == "interleave") return workload_interleave(p);
  if (name == "random") return workload_random(p, seed);
  throw std::invalid_argument("unknown workload '" + std::string(name) + "'");
}

std::vector<double> sort_via_merge(std::span<const double> values, Backend backend) {
  auto forest = make_forest(backend);
  if (!forest->capability().supports_parent) {
    throw UnsupportedOperation("sort_via_merge needs a backend with parent");
  }
  NodeRef top;
  for (double x : values) {
    const auto v = forest->insert(x);
    if (top.is_null()) {
      top = v;
      continue;
    }
    forest->merge(v, top);
    if (forest->key(top) < forest->key(v)) top = v;
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (auto v = top; !v.is_null(); v = forest->parent(v)) out.push_back(forest->key(v).label);
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace mergetree
