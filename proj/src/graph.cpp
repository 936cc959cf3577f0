#include "cdag/graph.hpp"

#include <algorithm>
#include <functional>
#include <queue>

#include "cdag/error.hpp"

namespace cdag {

std::string_view to_string(TaskKind kind) noexcept { return kind == TaskKind::Data ? "data" : "compute"; }

namespace {

std::string id_str(NodeId id) { return std::to_string(id.value); }

void insert_sorted(std::vector<NodeId>& v, NodeId id) {
  v.insert(std::lower_bound(v.begin(), v.end(), id), id);
}

bool erase_sorted(std::vector<NodeId>& v, NodeId id) {
  auto it = std::lower_bound(v.begin(), v.end(), id);
  if (it == v.end() || *it != id) return false;
  v.erase(it);
  return true;
}

}  // namespace

Cdag::Node& Cdag::node(NodeId id) {
  if (id.value >= nodes_.size() || !nodes_[id.value]) throw Error(ErrorCode::UnknownNode, "node " + id_str(id));
  return *nodes_[id.value];
}

const Cdag::Node& Cdag::node(NodeId id) const {
  if (id.value >= nodes_.size() || !nodes_[id.value]) throw Error(ErrorCode::UnknownNode, "node " + id_str(id));
  return *nodes_[id.value];
}

DescriptorId Cdag::intern(const TaskDescriptor& task) {
  std::string key;
  key.reserve(task.kernel.size() + 16);
  key += task.kind == TaskKind::Data ? 'D' : 'C';
  key += task.kernel;
  key += '\x1f';
  key += task.params.dump();
  auto [it, inserted] = descriptor_index_.try_emplace(std::move(key), static_cast<DescriptorId>(descriptors_.size()));
  if (inserted) {
    descriptors_.push_back(task);
  } else if (descriptors_[it->second].effort != task.effort) {
    throw Error(ErrorCode::InconsistentEffort, "task '" + task.kernel + "' registered with efforts " +
                                                   std::to_string(descriptors_[it->second].effort) + " and " +
                                                   std::to_string(task.effort));
  }
  return it->second;
}

NodeId Cdag::add_node(const TaskDescriptor& task) {
  NodeId id = next_id();
  add_node_with_id(id, task);
  return id;
}

void Cdag::add_node_with_id(NodeId id, const TaskDescriptor& task) {
  if (id.value < nodes_.size()) throw Error(ErrorCode::UnknownNode, "node id " + id_str(id) + " already used");
  DescriptorId desc = intern(task);
  nodes_.resize(id.value + 1);
  nodes_[id.value] = Node{desc, {}, {}};
  ++live_count_;
}

void Cdag::add_edge(NodeId from, NodeId to) {
  Node& src = node(from);
  Node& dst = node(to);
  TaskKind from_kind = descriptors_[src.descriptor].kind;
  TaskKind to_kind = descriptors_[dst.descriptor].kind;
  if (from_kind == to_kind) {
    throw Error(ErrorCode::KindViolation,
                "edge " + id_str(from) + "->" + id_str(to) + " connects two " + std::string(to_string(from_kind)) + " nodes");
  }
  if (std::binary_search(src.children.begin(), src.children.end(), to)) {
    throw Error(ErrorCode::DuplicateEdge, "edge " + id_str(from) + "->" + id_str(to));
  }
  if (to_kind == TaskKind::Data && !dst.parents.empty()) {
    throw Error(ErrorCode::MultipleProducers, "data node " + id_str(to) + " already produced by " + id_str(dst.parents.front()));
  }
  insert_sorted(src.children, to);
  dst.parents.push_back(from);
  ++edge_count_;
}

void Cdag::remove_edge(NodeId from, NodeId to) {
  Node& src = node(from);
  Node& dst = node(to);
  if (!erase_sorted(src.children, to)) throw Error(ErrorCode::UnknownNode, "no edge " + id_str(from) + "->" + id_str(to));
  dst.parents.erase(std::find(dst.parents.begin(), dst.parents.end(), from));
  --edge_count_;
}

void Cdag::replace_parent(NodeId child, NodeId old_parent, NodeId new_parent) {
  Node& c = node(child);
  auto pos = std::find(c.parents.begin(), c.parents.end(), old_parent);
  if (pos == c.parents.end()) throw Error(ErrorCode::UnknownNode, "no edge " + id_str(old_parent) + "->" + id_str(child));
  Node& np = node(new_parent);
  if (std::binary_search(np.children.begin(), np.children.end(), child)) {
    throw Error(ErrorCode::DuplicateEdge, "edge " + id_str(new_parent) + "->" + id_str(child));
  }
  erase_sorted(node(old_parent).children, child);
  insert_sorted(np.children, child);
  *pos = new_parent;
}

void Cdag::remove_node(NodeId id) {
  Node& n = node(id);
  for (NodeId p : n.parents) erase_sorted(node(p).children, id);
  for (NodeId c : n.children) {
    auto& ps = node(c).parents;
    ps.erase(std::find(ps.begin(), ps.end(), id));
  }
  edge_count_ -= n.parents.size() + n.children.size();
  nodes_[id.value].reset();
  --live_count_;
}

bool Cdag::contains(NodeId id) const noexcept { return id.value < nodes_.size() && nodes_[id.value].has_value(); }

bool Cdag::has_edge(NodeId from, NodeId to) const {
  const auto& c = node(from).children;
  return std::binary_search(c.begin(), c.end(), to);
}

const TaskDescriptor& Cdag::task(NodeId id) const { return descriptors_[node(id).descriptor]; }
DescriptorId Cdag::descriptor_id(NodeId id) const { return node(id).descriptor; }
std::span<const NodeId> Cdag::parents(NodeId id) const { return node(id).parents; }
std::span<const NodeId> Cdag::children(NodeId id) const { return node(id).children; }

std::vector<NodeId> Cdag::nodes() const {
  std::vector<NodeId> out;
  out.reserve(live_count_);
  for_each_node([&](NodeId id) { out.push_back(id); });
  return out;
}

std::vector<NodeId> Cdag::entry_nodes() const {
  std::vector<NodeId> out;
  for_each_node([&](NodeId id) {
    if (nodes_[id.value]->parents.empty()) out.push_back(id);
  });
  return out;
}

std::vector<NodeId> Cdag::exit_nodes() const {
  std::vector<NodeId> out;
  for_each_node([&](NodeId id) {
    if (nodes_[id.value]->children.empty()) out.push_back(id);
  });
  return out;
}

std::vector<std::pair<NodeId, NodeId>> Cdag::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edge_count_);
  for_each_node([&](NodeId id) {
    for (NodeId p : nodes_[id.value]->parents) out.emplace_back(p, id);
  });
  return out;
}

std::vector<NodeId> predecessors(const Cdag& g, NodeId n) {
  auto ps = g.parents(n);
  std::vector<NodeId> out(ps.begin(), ps.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> successors(const Cdag& g, NodeId n) {
  auto cs = g.children(n);
  return {cs.begin(), cs.end()};
}

std::string_view to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::KindViolation: return "KindViolation";
    case ViolationKind::MultipleProducers: return "MultipleProducers";
    case ViolationKind::CycleDetected: return "CycleDetected";
    case ViolationKind::NoEntry: return "NoEntry";
    case ViolationKind::EntryNotData: return "EntryNotData";
    case ViolationKind::NoExit: return "NoExit";
    case ViolationKind::MultipleExits: return "MultipleExits";
    case ViolationKind::ExitNotData: return "ExitNotData";
  }
  return "Unknown";
}

bool ValidationReport::has(ViolationKind kind) const noexcept {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

namespace {

// Returns one cycle (as a node sequence) if the graph has any.
std::vector<NodeId> find_cycle(const Cdag& g) {
  enum class Mark : std::uint8_t { White, Grey, Black };
  std::vector<Mark> mark(g.next_id().value, Mark::White);
  std::vector<NodeId> stack;
  std::vector<std::size_t> cursor;
  for (NodeId start : g.nodes()) {
    if (mark[start.value] != Mark::White) continue;
    stack.assign(1, start);
    cursor.assign(1, 0);
    mark[start.value] = Mark::Grey;
    while (!stack.empty()) {
      NodeId top = stack.back();
      auto kids = g.children(top);
      if (cursor.back() < kids.size()) {
        NodeId next = kids[cursor.back()++];
        if (mark[next.value] == Mark::Grey) {
          auto from = std::find(stack.begin(), stack.end(), next);
          return {from, stack.end()};
        }
        if (mark[next.value] == Mark::White) {
          mark[next.value] = Mark::Grey;
          stack.push_back(next);
          cursor.push_back(0);
        }
      } else {
        mark[top.value] = Mark::Black;
        stack.pop_back();
        cursor.pop_back();
      }
    }
  }
  return {};
}

std::string join_ids(const std::vector<NodeId>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(ids[i].value);
  }
  return s;
}

}  // namespace

ValidationReport validate(const Cdag& g) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, std::string message, std::vector<NodeId> nodes) {
    report.violations.push_back({kind, std::move(message), std::move(nodes)});
  };

  for (auto [from, to] : g.edges()) {
    if (g.kind(from) == g.kind(to)) add(ViolationKind::KindViolation, "edge between two nodes of one kind", {from, to});
  }
  g.for_each_node([&](NodeId id) {
    if (g.kind(id) == TaskKind::Data && g.parents(id).size() > 1) {
      add(ViolationKind::MultipleProducers, "data node with several incoming edges", {id});
    }
  });

  auto cycle = find_cycle(g);
  if (!cycle.empty()) add(ViolationKind::CycleDetected, "cycle through " + join_ids(cycle), cycle);

  auto entries = g.entry_nodes();
  if (entries.empty()) add(ViolationKind::NoEntry, "graph has no entry node", {});
  for (NodeId e : entries) {
    if (g.kind(e) != TaskKind::Data) add(ViolationKind::EntryNotData, "entry node is a compute node", {e});
  }

  auto exits = g.exit_nodes();
  if (exits.empty()) {
    add(ViolationKind::NoExit, "graph has no exit node", {});
  } else if (exits.size() > 1) {
    add(ViolationKind::MultipleExits, "graph has " + std::to_string(exits.size()) + " exit nodes: " + join_ids(exits), exits);
  }
  for (NodeId e : exits) {
    if (g.kind(e) != TaskKind::Data) add(ViolationKind::ExitNotData, "exit node is a compute node", {e});
  }
  return report;
}

void require_valid(const Cdag& g) {
  auto report = validate(g);
  if (!report.ok()) {
    const auto& v = report.violations.front();
    throw Error(ErrorCode::ValidationFailed, std::string(to_string(v.kind)) + ": " + v.message);
  }
}

std::vector<NodeId> topological_order(const Cdag& g) {
  std::vector<std::size_t> indegree(g.next_id().value, 0);
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  g.for_each_node([&](NodeId id) {
    indegree[id.value] = g.parents(id).size();
    if (indegree[id.value] == 0) ready.push(id);
  });
  std::vector<NodeId> order;
  order.reserve(g.node_count());
  while (!ready.empty()) {
    NodeId n = ready.top();
    ready.pop();
    order.push_back(n);
    for (NodeId c : g.children(n)) {
      if (--indegree[c.value] == 0) ready.push(c);
    }
  }
  if (order.size() != g.node_count()) throw Error(ErrorCode::CycleDetected, "graph is not acyclic");
  return order;
}

}  // namespace cdag
