#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cdag/task.hpp"

namespace cdag {

/// Index into a graph's interned descriptor table. Equal ids mean same task.
using DescriptorId = std::uint32_t;

/// Bipartite compute/data DAG with ordered compute arguments.
///
/// Nodes live in a NodeId-indexed table. Ids are handed out monotonically and
/// never reused, so iterating in id order is deterministic. The parent list of
/// a node is ordered (argument order of the kernel); children are kept sorted.
///
/// Cycle checks are deferred to validate(); add_edge only enforces the local
/// rules (bipartite, no duplicates, one producer per data node).
class Cdag {
 public:
  NodeId add_node(const TaskDescriptor& task);
  void add_edge(NodeId from, NodeId to);

  /// Adds a node with a caller-chosen id, used when reading a persisted graph.
  /// The id must be at least next_id().
  void add_node_with_id(NodeId id, const TaskDescriptor& task);

  void remove_node(NodeId id);
  void remove_edge(NodeId from, NodeId to);
  /// Replaces `old_parent` by `new_parent` at the same argument position of `child`.
  void replace_parent(NodeId child, NodeId old_parent, NodeId new_parent);

  bool contains(NodeId id) const noexcept;
  bool has_edge(NodeId from, NodeId to) const;

  const TaskDescriptor& task(NodeId id) const;
  DescriptorId descriptor_id(NodeId id) const;
  const TaskDescriptor& descriptor(DescriptorId id) const { return descriptors_.at(id); }
  std::size_t descriptor_count() const noexcept { return descriptors_.size(); }
  TaskKind kind(NodeId id) const { return task(id).kind; }

  /// Ordered argument list.
  std::span<const NodeId> parents(NodeId id) const;
  /// Sorted by id.
  std::span<const NodeId> children(NodeId id) const;

  std::size_t node_count() const noexcept { return live_count_; }
  std::size_t edge_count() const noexcept { return edge_count_; }
  NodeId next_id() const noexcept { return NodeId{static_cast<std::uint64_t>(nodes_.size())}; }

  /// All live nodes in increasing id order.
  std::vector<NodeId> nodes() const;
  std::vector<NodeId> entry_nodes() const;
  std::vector<NodeId> exit_nodes() const;

  /// All edges as (from, to), ordered by target id and then argument position.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  template <typename F>
  void for_each_node(F&& fn) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i]) fn(NodeId{i});
    }
  }

 private:
  struct Node {
    DescriptorId descriptor = 0;
    std::vector<NodeId> parents;
    std::vector<NodeId> children;
  };

  DescriptorId intern(const TaskDescriptor& task);
  Node& node(NodeId id);
  const Node& node(NodeId id) const;

  std::vector<std::optional<Node>> nodes_;
  std::vector<TaskDescriptor> descriptors_;
  std::unordered_map<std::string, DescriptorId> descriptor_index_;
  std::size_t live_count_ = 0;
  std::size_t edge_count_ = 0;
};

std::vector<NodeId> predecessors(const Cdag& g, NodeId n);
std::vector<NodeId> successors(const Cdag& g, NodeId n);

enum class ViolationKind {
  KindViolation,
  MultipleProducers,
  CycleDetected,
  NoEntry,
  EntryNotData,
  NoExit,
  MultipleExits,
  ExitNotData,
};

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  std::string message;
  std::vector<NodeId> nodes;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(ViolationKind kind) const noexcept;
};

ValidationReport validate(const Cdag& g);

/// Throws Error(ValidationFailed) with the first violation when `g` is invalid.
void require_valid(const Cdag& g);

/// Kahn order with ties broken by smallest NodeId. Throws CycleDetected.
std::vector<NodeId> topological_order(const Cdag& g);

}  // namespace cdag
