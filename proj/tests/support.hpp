#pragma once

// Random CDAG generator and its kernels, shared by the property tests.

#include <cmath>
#include <random>

#include "cdag/graph.hpp"
#include "cdag/kernel.hpp"
#include "cdag/models/registry.hpp"
#include "cdag/plan.hpp"

namespace testing {

using namespace cdag;

struct RandomGraphOptions {
  std::size_t entries = 3;
  std::size_t computes = 30;
  std::size_t kernel_variants = 3;
  double duplicate_rate = 0.3;  // chance that a compute node copies an existing one
};

inline TaskDescriptor random_compute(int variant) {
  return compute_task("rnd.f", 10 + 7 * static_cast<std::uint64_t>(variant), {{"a", variant}});
}

inline TaskDescriptor random_data(int variant) { return data_task("rnd.d", 8 * (1 + variant % 2), {{"v", variant % 2}}); }

/// Valid random CDAG: each compute node takes 1-3 distinct data nodes and
/// produces one; a final rnd.sum joins every dangling data node into the exit.
inline Cdag random_cdag(std::uint64_t seed, const RandomGraphOptions& o = {}) {
  std::mt19937_64 rng(seed);
  Cdag g;
  std::vector<NodeId> data;
  struct Made {
    int variant;
    std::vector<NodeId> parents;
  };
  std::vector<Made> made;
  for (std::size_t i = 0; i < o.entries; ++i) data.push_back(g.add_node(data_task("rnd.in", 8, {{kInputIndexKey, i}})));
  for (std::size_t c = 0; c < o.computes; ++c) {
    Made m;
    if (!made.empty() && std::uniform_real_distribution<double>(0, 1)(rng) < o.duplicate_rate) {
      m = made[rng() % made.size()];
    } else {
      m.variant = static_cast<int>(rng() % o.kernel_variants);
      const std::size_t arity = 1 + rng() % std::min<std::size_t>(3, data.size());
      std::vector<NodeId> pool = data;
      std::shuffle(pool.begin(), pool.end(), rng);
      m.parents.assign(pool.begin(), pool.begin() + arity);
    }
    NodeId t = g.add_node(random_compute(m.variant));
    for (NodeId p : m.parents) g.add_edge(p, t);
    NodeId d = g.add_node(random_data(m.variant));
    g.add_edge(t, d);
    data.push_back(d);
    made.push_back(m);
  }
  NodeId sum = g.add_node(compute_task("rnd.sum", 1));
  for (NodeId d : data) {
    if (g.children(d).empty()) g.add_edge(d, sum);
  }
  NodeId exit = g.add_node(data_task("rnd.out", 8));
  g.add_edge(sum, exit);
  return g;
}

inline const KernelRegistry& test_registry() {
  static const KernelRegistry r = [] {
    KernelRegistry k = models::default_registry();
    k.add("rnd.f", [](const Json& p) -> KernelFn {
      const double a = p.value("a", 0.0);
      return [a](KernelArgs args) -> Value {
        double v = a;
        for (std::size_t i = 0; i < args.size(); ++i) v += 0.5 * static_cast<double>(i + 1) * std::sin(arg<double>(args, i, "rnd.f"));
        return v;
      };
    });
    k.add_simple("rnd.sum", [](KernelArgs args) -> Value {
      double v = 0;
      for (std::size_t i = 0; i < args.size(); ++i) v += arg<double>(args, i, "rnd.sum");
      return v;
    });
    return k;
  }();
  return r;
}

inline InputRecord random_input(std::size_t entries, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  InputRecord r;
  for (std::size_t i = 0; i < entries; ++i) r.push_back(u(rng));
  return r;
}

inline Value eval(const Cdag& g, const InputRecord& in) { return evaluate(g, test_registry(), in); }

/// Same graph with node ids assigned in a shuffled order.
inline Cdag relabel(const Cdag& g, std::uint64_t seed) {
  auto nodes = g.nodes();
  std::mt19937_64 rng(seed);
  std::shuffle(nodes.begin(), nodes.end(), rng);
  Cdag out;
  std::unordered_map<std::uint64_t, NodeId> map;
  for (NodeId n : nodes) map[n.value] = out.add_node(g.task(n));
  auto by_child = g.nodes();
  std::shuffle(by_child.begin(), by_child.end(), rng);
  for (NodeId c : by_child) {
    for (NodeId p : g.parents(c)) out.add_edge(map.at(p.value), map.at(c.value));
  }
  return out;
}

}  // namespace testing
