#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cdag/graph.hpp"
#include "cdag/value.hpp"

namespace cdag {

/// Nodes that compute the same task from the same ordered arguments.
struct ReductionGroup {
  std::vector<NodeId> members;  // sorted, size >= 2
  TaskKind kind = TaskKind::Compute;
  std::vector<NodeId> shared_parents;  // ordered argument list common to all members
};

struct SplitTarget {
  NodeId node;
  std::size_t successor_count = 0;
};

struct MetricDelta {
  std::int64_t d_compute_effort = 0;
  std::int64_t d_data_transfer = 0;

  friend bool operator==(const MetricDelta&, const MetricDelta&) = default;
};

/// All maximal reducible groups, in order of their smallest member.
///
/// Data nodes form a group only when their successor sets are pairwise
/// disjoint, since merging two arguments of one consumer would need a
/// duplicate edge.
std::vector<ReductionGroup> find_reductions(const Cdag& g);

/// Throws StaleGroup when `group` no longer describes reducible nodes of `g`.
void check_group(const Cdag& g, const ReductionGroup& group);

/// Keeps the smallest member and moves every other member's children onto it.
/// Returns the surviving node.
NodeId apply_reduction(Cdag& g, const ReductionGroup& group);

/// Replaces the node by one copy per successor. Returns the copies; the first
/// reuses the original id.
std::vector<NodeId> apply_split(Cdag& g, const SplitTarget& target);

MetricDelta predict_delta(const Cdag& g, const ReductionGroup& group);
MetricDelta predict_delta(const Cdag& g, const SplitTarget& target);

struct AppliedReduction {
  std::vector<NodeId> members;
  NodeId survivor;
  MetricDelta delta;
};

struct FixpointResult {
  Cdag graph;
  std::size_t applied = 0;
  std::vector<AppliedReduction> log;
};

/// Greedy reduce-all in rounds: scan, apply every group whose arguments are
/// not themselves being merged (in an order shuffled by `order_seed`), repeat
/// until no group remains.
FixpointResult reduce_to_fixpoint(Cdag g, std::uint64_t order_seed = 0);

using Evaluator = std::function<Value(const Cdag&, const InputRecord&)>;

/// Sampled computational equivalence: same entry signature and outputs that
/// agree to relative tolerance `tol` on every sample. Throws SignatureMismatch.
bool check_equivalence(const Cdag& a, const Cdag& b, const Evaluator& evaluator, std::span<const InputRecord> samples,
                       double tol);

}  // namespace cdag
