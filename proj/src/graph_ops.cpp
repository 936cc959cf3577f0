#include "cdag/graph_ops.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "cdag/error.hpp"
#include "cdag/metrics.hpp"

namespace cdag {

namespace {

struct GroupKey {
  DescriptorId descriptor;
  std::vector<NodeId> parents;

  bool operator==(const GroupKey&) const = default;
};

struct GroupKeyHash {
  std::size_t operator()(const GroupKey& k) const noexcept {
    std::size_t h = std::hash<std::uint32_t>{}(k.descriptor);
    for (NodeId p : k.parents) h = h * 1000003u ^ std::hash<NodeId>{}(p);
    return h;
  }
};

bool successors_disjoint(const Cdag& g, std::span<const NodeId> members) {
  std::vector<NodeId> all;
  for (NodeId m : members) {
    auto cs = g.children(m);
    all.insert(all.end(), cs.begin(), cs.end());
  }
  std::sort(all.begin(), all.end());
  return std::adjacent_find(all.begin(), all.end()) == all.end();
}

}  // namespace

std::vector<ReductionGroup> find_reductions(const Cdag& g) {
  std::unordered_map<GroupKey, std::vector<NodeId>, GroupKeyHash> buckets;
  std::vector<const GroupKey*> order;
  g.for_each_node([&](NodeId id) {
    auto ps = g.parents(id);
    GroupKey key{g.descriptor_id(id), {ps.begin(), ps.end()}};
    auto [it, inserted] = buckets.try_emplace(std::move(key));
    if (inserted) order.push_back(&it->first);
    it->second.push_back(id);
  });

  std::vector<ReductionGroup> groups;
  for (const GroupKey* key : order) {
    const auto& members = buckets.at(*key);
    if (members.size() < 2) continue;
    const TaskKind kind = g.descriptor(key->descriptor).kind;
    // Equal data nodes that share a consumer never merge: which pairs to
    // merge would be ambiguous, and leaving the whole set alone keeps the
    // fixpoint unique.
    if (kind == TaskKind::Data && !successors_disjoint(g, members)) continue;
    groups.push_back({members, kind, key->parents});
  }
  return groups;
}

void check_group(const Cdag& g, const ReductionGroup& group) {
  auto stale = [](const std::string& why) { throw Error(ErrorCode::StaleGroup, why); };
  if (group.members.size() < 2) stale("group has fewer than two members");
  if (!std::is_sorted(group.members.begin(), group.members.end()) ||
      std::adjacent_find(group.members.begin(), group.members.end()) != group.members.end()) {
    stale("group members must be sorted and distinct");
  }
  for (NodeId m : group.members) {
    if (!g.contains(m)) stale("member " + std::to_string(m.value) + " no longer exists");
  }
  const DescriptorId desc = g.descriptor_id(group.members.front());
  for (NodeId m : group.members) {
    if (g.descriptor_id(m) != desc) stale("members compute different tasks");
    auto ps = g.parents(m);
    if (!std::equal(ps.begin(), ps.end(), group.shared_parents.begin(), group.shared_parents.end())) {
      stale("parents of member " + std::to_string(m.value) + " changed");
    }
  }
  if (g.descriptor(desc).kind != group.kind) stale("group kind does not match its members");
  if (group.kind == TaskKind::Data && !successors_disjoint(g, group.members)) {
    stale("data members share a consumer");
  }
}

NodeId apply_reduction(Cdag& g, const ReductionGroup& group) {
  check_group(g, group);
  const NodeId survivor = group.members.front();
  for (std::size_t i = 1; i < group.members.size(); ++i) {
    const NodeId victim = group.members[i];
    const auto kids = successors(g, victim);
    for (NodeId child : kids) g.replace_parent(child, victim, survivor);
    g.remove_node(victim);
  }
  return survivor;
}

std::vector<NodeId> apply_split(Cdag& g, const SplitTarget& target) {
  if (!g.contains(target.node)) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(target.node.value));
  const auto kids = successors(g, target.node);
  if (kids.size() < 2) throw Error(ErrorCode::NotSplittable, "node has fewer than two successors");
  if (target.successor_count != 0 && target.successor_count != kids.size()) {
    throw Error(ErrorCode::NotSplittable, "successor count changed since discovery");
  }
  const TaskDescriptor task = g.task(target.node);
  const auto ps = g.parents(target.node);
  const std::vector<NodeId> parents(ps.begin(), ps.end());

  std::vector<NodeId> copies{target.node};
  for (std::size_t i = 1; i < kids.size(); ++i) {
    NodeId copy = g.add_node(task);
    for (NodeId p : parents) g.add_edge(p, copy);
    g.replace_parent(kids[i], target.node, copy);
    copies.push_back(copy);
  }
  return copies;
}

MetricDelta predict_delta(const Cdag& g, const ReductionGroup& group) {
  check_group(g, group);
  const auto k = static_cast<std::int64_t>(group.members.size()) - 1;
  MetricDelta d;
  if (group.kind == TaskKind::Compute) {
    d.d_compute_effort = -k * static_cast<std::int64_t>(g.task(group.members.front()).effort);
    std::int64_t parent_bytes = 0;
    for (NodeId p : group.shared_parents) parent_bytes += static_cast<std::int64_t>(g.task(p).effort);
    d.d_data_transfer = -k * parent_bytes;
  }
  // Merged data nodes keep the union of their (disjoint) successors, so
  // size times out-degree is unchanged, and compute producers carry no D.
  return d;
}

MetricDelta predict_delta(const Cdag& g, const SplitTarget& target) {
  if (!g.contains(target.node)) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(target.node.value));
  const auto kids = g.children(target.node);
  if (kids.size() < 2) throw Error(ErrorCode::NotSplittable, "node has fewer than two successors");
  const auto k = static_cast<std::int64_t>(kids.size()) - 1;
  MetricDelta d;
  if (g.kind(target.node) == TaskKind::Compute) {
    d.d_compute_effort = k * static_cast<std::int64_t>(g.task(target.node).effort);
    std::int64_t parent_bytes = 0;
    for (NodeId p : g.parents(target.node)) parent_bytes += static_cast<std::int64_t>(g.task(p).effort);
    d.d_data_transfer = k * parent_bytes;
  }
  return d;
}

FixpointResult reduce_to_fixpoint(Cdag g, std::uint64_t order_seed) {
  FixpointResult result;
  std::mt19937_64 rng(order_seed);
  for (;;) {
    auto groups = find_reductions(g);
    if (groups.empty()) break;
    // Groups whose arguments are merged this round wait for the next scan, so
    // the groups applied in one round are independent and their order is free.
    std::unordered_set<NodeId> busy;
    for (const auto& grp : groups) busy.insert(grp.members.begin(), grp.members.end());
    std::erase_if(groups, [&](const ReductionGroup& grp) {
      return std::any_of(grp.shared_parents.begin(), grp.shared_parents.end(),
                         [&](NodeId p) { return busy.contains(p); });
    });
    std::shuffle(groups.begin(), groups.end(), rng);
    for (const auto& group : groups) {
      try {
        check_group(g, group);
      } catch (const Error&) {
        continue;  // invalidated by an earlier merge this round; rescanned next round
      }
      MetricDelta delta = predict_delta(g, group);
      NodeId survivor = apply_reduction(g, group);
      ++result.applied;
      result.log.push_back({group.members, survivor, delta});
    }
  }
  result.graph = std::move(g);
  return result;
}

namespace {

std::vector<std::pair<Json, std::string>> entry_signature(const Cdag& g) {
  std::vector<std::pair<Json, std::string>> sig;
  for (NodeId e : g.entry_nodes()) {
    const auto& t = g.task(e);
    sig.emplace_back(t.params.value(kInputIndexKey, Json()), t.kernel);
  }
  std::sort(sig.begin(), sig.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  });
  sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
  return sig;
}

}  // namespace

bool check_equivalence(const Cdag& a, const Cdag& b, const Evaluator& evaluator, std::span<const InputRecord> samples,
                       double tol) {
  if (entry_signature(a) != entry_signature(b)) {
    throw Error(ErrorCode::SignatureMismatch, "graphs take different inputs");
  }
  for (const auto& sample : samples) {
    if (relative_difference(evaluator(a, sample), evaluator(b, sample)) > tol) return false;
  }
  return true;
}

}  // namespace cdag
