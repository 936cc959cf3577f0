#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "cdag/canonical_hash.hpp"
#include "cdag/error.hpp"
#include "cdag/graph_ops.hpp"
#include "cdag/metrics.hpp"
#include "cdag/qed/compton.hpp"
#include "support.hpp"

using namespace cdag;

namespace {

// x -> {T, T} -> {y, y} -> J -> out, both T equal (effort 10, parent 8 bytes).
Cdag twin_graph() {
  Cdag g;
  auto x = g.add_node(data_task("x", 8, {{kInputIndexKey, 0}}));
  auto ta = g.add_node(compute_task("rnd.f", 10, {{"a", 1}}));
  auto tb = g.add_node(compute_task("rnd.f", 10, {{"a", 1}}));
  auto ya = g.add_node(data_task("y", 8));
  auto yb = g.add_node(data_task("y", 8));
  auto j = g.add_node(compute_task("rnd.sum", 1));
  auto out = g.add_node(data_task("out", 8));
  g.add_edge(x, ta);
  g.add_edge(x, tb);
  g.add_edge(ta, ya);
  g.add_edge(tb, yb);
  g.add_edge(ya, j);
  g.add_edge(yb, j);
  g.add_edge(j, out);
  return g;
}

MetricDelta measured(const Cdag& before, const Cdag& after) {
  auto b = graph_metrics(before), a = graph_metrics(after);
  return {static_cast<std::int64_t>(a.compute_effort) - static_cast<std::int64_t>(b.compute_effort),
          static_cast<std::int64_t>(a.data_transfer) - static_cast<std::int64_t>(b.data_transfer)};
}

}  // namespace

TEST_CASE("twin compute nodes reduce to one with two children") {
  Cdag g = twin_graph();
  auto groups = find_reductions(g);
  REQUIRE(groups.size() == 1);
  CHECK(groups[0].kind == TaskKind::Compute);
  CHECK(groups[0].members == std::vector<NodeId>{NodeId{1}, NodeId{2}});
  CHECK(predict_delta(g, groups[0]) == MetricDelta{-10, -8});
  Cdag before = g;
  const NodeId s = apply_reduction(g, groups[0]);
  CHECK(s == NodeId{1});
  CHECK(g.children(s).size() == 2);
  CHECK(validate(g).ok());
  CHECK(measured(before, g) == MetricDelta{-10, -8});
  // y nodes share the consumer J, so they must stay apart
  CHECK(find_reductions(g).empty());
  for (std::uint64_t i = 0; i < 5; ++i) {
    auto in = testing::random_input(1, i);
    CHECK(relative_difference(testing::eval(g, in), testing::eval(before, in)) <= 1e-12);
  }
}

TEST_CASE("fixpoint on the twin graph takes one step") {
  auto r = reduce_to_fixpoint(twin_graph(), 5);
  CHECK(r.applied == 1);
  CHECK(r.graph.node_count() == 6);
  auto again = reduce_to_fixpoint(r.graph, 9);
  CHECK(again.applied == 0);
  CHECK(canonical_hash(again.graph) == canonical_hash(r.graph));
}

TEST_CASE("no groups without duplicates") {
  testing::RandomGraphOptions o;
  o.duplicate_rate = 0.0;
  o.kernel_variants = 1000;
  Cdag g = testing::random_cdag(3, o);
  CHECK(find_reductions(g).empty());
}

TEST_CASE("stale groups are rejected") {
  Cdag g = twin_graph();
  auto groups = find_reductions(g);
  apply_reduction(g, groups[0]);
  try {
    apply_reduction(g, groups[0]);
    FAIL("expected StaleGroup");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StaleGroup);
  }
}

TEST_CASE("split examples") {
  Cdag g;
  auto a = g.add_node(data_task("a", 12, {{kInputIndexKey, 0}}));
  auto b = g.add_node(data_task("b", 8, {{kInputIndexKey, 1}}));
  auto t = g.add_node(compute_task("f", 5));
  g.add_edge(a, t);
  g.add_edge(b, t);
  std::vector<NodeId> kids;
  auto j = g.add_node(compute_task("j", 1));
  for (int i = 0; i < 3; ++i) {
    kids.push_back(g.add_node(data_task("y", 8)));
    g.add_edge(t, kids.back());
    g.add_edge(kids.back(), j);
  }
  auto out = g.add_node(data_task("out", 8));
  g.add_edge(j, out);
  Cdag before = g;
  CHECK(predict_delta(g, SplitTarget{t, 3}) == MetricDelta{10, 40});
  auto copies = apply_split(g, SplitTarget{t, 3});
  CHECK(copies.size() == 3);
  CHECK(copies.front() == t);
  for (NodeId c : copies) CHECK(g.children(c).size() == 1);
  CHECK(validate(g).ok());
  CHECK(measured(before, g) == MetricDelta{10, 40});
  CHECK_THROWS_AS(apply_split(g, SplitTarget{t, 0}), Error);
  // the copies reduce back to the original structure
  auto r = reduce_to_fixpoint(g, 1);
  CHECK(canonical_hash(r.graph) == canonical_hash(before));
}

TEST_CASE("Compton graphs reduce to memoized subdiagram sharing") {
  for (std::size_t n = 1; n <= 4; ++n) {
    qed::ComptonProcess p;
    p.n = n;
    Cdag g = qed::generate_compton_dag(p);
    if (n >= 2) CHECK_FALSE(find_reductions(g).empty());
    auto r1 = reduce_to_fixpoint(g, 1);
    auto r2 = reduce_to_fixpoint(g, 2);
    CHECK(canonical_hash(r1.graph) == canonical_hash(r2.graph));
    p.reuse = models::ReuseMode::Subdiagrams;
    CHECK(canonical_hash(r1.graph) == canonical_hash(qed::generate_compton_dag(p)));
    CHECK(graph_compute_effort(r1.graph) <= graph_compute_effort(g));
  }
}

TEST_CASE("property: predicted deltas match recomputed metrics") {
  std::mt19937_64 rng(2024);
  std::size_t ops = 0, reductions = 0, splits = 0;
  for (std::uint64_t seed = 0; ops < 1000; ++seed) {
    Cdag g = testing::random_cdag(seed);
    for (int step = 0; step < 40 && ops < 1000; ++step) {
      auto groups = find_reductions(g);
      std::vector<SplitTarget> targets;
      g.for_each_node([&](NodeId n) {
        if (g.children(n).size() >= 2) targets.push_back({n, g.children(n).size()});
      });
      const bool do_split = !targets.empty() && (groups.empty() || rng() % 2);
      if (!do_split && groups.empty()) break;
      Cdag before = g;
      MetricDelta predicted;
      if (do_split) {
        const auto& t = targets[rng() % targets.size()];
        predicted = predict_delta(g, t);
        apply_split(g, t);
        ++splits;
      } else {
        const auto& grp = groups[rng() % groups.size()];
        predicted = predict_delta(g, grp);
        if (grp.kind == TaskKind::Compute) {
          const auto k = static_cast<std::int64_t>(grp.members.size()) - 1;
          CHECK(predicted.d_compute_effort == -k * static_cast<std::int64_t>(g.task(grp.members[0]).effort));
        }
        apply_reduction(g, grp);
        ++reductions;
      }
      REQUIRE(validate(g).ok());
      CHECK(measured(before, g) == predicted);
      ++ops;
    }
  }
  CHECK(reductions > 100);
  CHECK(splits > 100);
}

TEST_CASE("property: fixpoint is order independent and preserves outputs") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Cdag g = testing::random_cdag(seed);
    auto a = reduce_to_fixpoint(g, seed);
    auto b = reduce_to_fixpoint(testing::relabel(g, seed + 7), seed * 31 + 1);
    CHECK(canonical_hash(a.graph) == canonical_hash(b.graph));
    CHECK(find_reductions(a.graph).empty());
    for (std::uint64_t s = 0; s < 3; ++s) {
      auto in = testing::random_input(3, s);
      CHECK(relative_difference(testing::eval(g, in), testing::eval(a.graph, in)) <= 1e-12);
    }
  }
}

// A data node whose producer has another child with the same task. Copies of
// such a node join a bucket that may be locked by a shared consumer.
bool has_twin_sibling(const Cdag& g, NodeId n) {
  if (g.kind(n) != TaskKind::Data || g.parents(n).empty()) return false;
  for (NodeId s : g.children(g.parents(n).front())) {
    if (s != n && g.descriptor_id(s) == g.descriptor_id(n)) return true;
  }
  return false;
}

TEST_CASE("property: split then reduce returns to the fixpoint") {
  std::size_t tried = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Cdag fix = reduce_to_fixpoint(testing::random_cdag(seed), 0).graph;
    const auto want = canonical_hash(fix);
    fix.for_each_node([&](NodeId n) {
      if (fix.children(n).size() < 2 || has_twin_sibling(fix, n)) return;
      Cdag g = fix;
      apply_split(g, {n, fix.children(n).size()});
      CHECK(canonical_hash(reduce_to_fixpoint(g, seed).graph) == want);
      ++tried;
    });
  }
  CHECK(tried > 50);
}

TEST_CASE("equal data nodes sharing a consumer stay apart") {
  // T feeds J twice through y1 and y2; y1 also feeds K. Splitting y1 gives a
  // copy that could merge with y1 or y2, so reduction leaves the set alone.
  Cdag g = twin_graph();
  apply_reduction(g, find_reductions(g).front());
  const NodeId y1{3};
  auto k = g.add_node(compute_task("rnd.f", 10, {{"a", 2}}));
  auto ko = g.add_node(data_task("y", 8));
  g.add_edge(y1, k);
  g.add_edge(k, ko);
  auto j2 = g.add_node(compute_task("rnd.sum", 1));
  auto out2 = g.add_node(data_task("out", 8));
  g.add_edge(NodeId{6}, j2);
  g.add_edge(ko, j2);
  g.add_edge(j2, out2);
  REQUIRE(validate(g).ok());
  CHECK(find_reductions(g).empty());
  apply_split(g, {y1, 2});
  CHECK(find_reductions(g).empty());
  CHECK(validate(g).ok());
}

TEST_CASE("equivalence check") {
  Cdag g = testing::random_cdag(11);
  std::vector<InputRecord> samples;
  for (std::uint64_t s = 0; s < 5; ++s) samples.push_back(testing::random_input(3, s));
  const Evaluator ev = testing::eval;
  CHECK(check_equivalence(g, g, ev, samples, 1e-12));
  CHECK(check_equivalence(g, reduce_to_fixpoint(g, 3).graph, ev, samples, 1e-12));

  // perturb one kernel parameter
  Cdag h;
  bool changed = false;
  for (NodeId n : g.nodes()) {
    TaskDescriptor t = g.task(n);
    if (!changed && t.kernel == "rnd.f") {
      t.params["a"] = t.params["a"].get<int>() + 100;
      t.effort = 999;
      changed = true;
    }
    h.add_node_with_id(n, t);
  }
  for (auto [a, b] : g.edges()) h.add_edge(a, b);
  CHECK_FALSE(check_equivalence(g, h, ev, samples, 1e-12));

  Cdag other = testing::random_cdag(12, {.entries = 4});
  CHECK_THROWS_AS(check_equivalence(g, other, ev, samples, 1e-12), Error);
}
