#include "cdag/schedule.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "cdag/error.hpp"

namespace cdag {

Machine Machine::single(Device device) {
  Machine m;
  m.devices.push_back(std::move(device));
  m.transfer_rate = [](std::size_t, std::size_t) { return std::numeric_limits<double>::infinity(); };
  return m;
}

Machine Machine::uniform(std::size_t count, Device prototype, double link_rate) {
  Machine m;
  for (std::size_t i = 0; i < count; ++i) {
    Device d = prototype;
    d.id = prototype.id + std::to_string(i);
    m.devices.push_back(std::move(d));
  }
  m.transfer_rate = [link_rate](std::size_t, std::size_t) { return link_rate; };
  return m;
}

double Machine::rate(std::size_t from, std::size_t to) const {
  if (from == to) return std::numeric_limits<double>::infinity();
  return transfer_rate ? transfer_rate(from, to) : std::numeric_limits<double>::infinity();
}

namespace {

double transfer_seconds(const Machine& m, std::uint64_t bytes, std::size_t from, std::size_t to) {
  if (from == to || bytes == 0) return 0.0;
  return static_cast<double>(bytes) / m.rate(from, to);
}

}  // namespace

Schedule schedule(const Cdag& g, const Machine& m) {
  if (m.devices.empty()) throw Error(ErrorCode::InvalidSchedule, "machine has no devices");
  Schedule s;
  s.steps.reserve(g.node_count());
  if (m.devices.size() == 1) {
    for (NodeId n : topological_order(g)) s.steps.push_back({n, 0});
    return s;
  }

  const std::size_t slots = g.next_id().value;
  std::vector<double> available(slots, 0.0);
  std::vector<std::size_t> device_of(slots, 0);
  std::vector<std::size_t> missing(slots, 0);
  std::vector<double> device_free(m.devices.size(), 0.0);
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;

  auto release = [&](NodeId data) {
    for (NodeId consumer : g.children(data)) {
      if (--missing[consumer.value] == 0) ready.push(consumer);
    }
  };

  g.for_each_node([&](NodeId id) { missing[id.value] = g.parents(id).size(); });
  for (NodeId e : g.entry_nodes()) {
    if (g.kind(e) != TaskKind::Data) throw Error(ErrorCode::ValidationFailed, "entry node is a compute node");
    s.steps.push_back({e, 0});
  }
  for (NodeId e : g.entry_nodes()) release(e);

  while (!ready.empty()) {
    const NodeId c = ready.top();
    ready.pop();
    const auto effort = static_cast<double>(g.task(c).effort);
    std::size_t best = 0;
    double best_finish = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m.devices.size(); ++k) {
      double ready_at = 0.0;
      for (NodeId p : g.parents(c)) {
        ready_at = std::max(ready_at, available[p.value] + transfer_seconds(m, g.task(p).effort, device_of[p.value], k));
      }
      const double finish = std::max(ready_at, device_free[k]) + effort / m.devices[k].flops_rate;
      if (finish < best_finish) {
        best_finish = finish;
        best = k;
      }
    }
    device_free[best] = best_finish;
    device_of[c.value] = best;
    available[c.value] = best_finish;
    s.steps.push_back({c, best});
    for (NodeId d : g.children(c)) {
      device_of[d.value] = best;
      available[d.value] = best_finish;
      s.steps.push_back({d, best});
      release(d);
    }
  }
  if (s.steps.size() != g.node_count()) throw Error(ErrorCode::CycleDetected, "graph is not acyclic");
  return s;
}

void check_schedule(const Cdag& g, const Schedule& s, std::size_t device_count) {
  const std::size_t slots = g.next_id().value;
  std::vector<bool> done(slots, false);
  if (s.steps.size() != g.node_count()) throw Error(ErrorCode::InvalidSchedule, "schedule does not cover every node once");
  for (const auto& step : s.steps) {
    if (!g.contains(step.node)) throw Error(ErrorCode::InvalidSchedule, "unknown node " + std::to_string(step.node.value));
    if (done[step.node.value]) throw Error(ErrorCode::InvalidSchedule, "node scheduled twice");
    if (device_count != 0 && step.device >= device_count) throw Error(ErrorCode::InvalidSchedule, "device out of range");
    for (NodeId p : g.parents(step.node)) {
      if (!done[p.value]) throw Error(ErrorCode::InvalidSchedule, "node scheduled before its argument");
    }
    done[step.node.value] = true;
  }
}

double estimate_runtime(const Cdag& g, const Schedule& s, const Machine& m) {
  check_schedule(g, s, m.devices.size());
  const std::size_t slots = g.next_id().value;
  std::vector<double> finish(slots, 0.0);
  std::vector<std::size_t> device_of(slots, 0);
  std::vector<double> device_free(m.devices.size(), 0.0);
  double makespan = 0.0;
  for (const auto& step : s.steps) {
    const NodeId n = step.node;
    device_of[n.value] = step.device;
    const auto& t = g.task(n);
    if (t.kind == TaskKind::Data) {
      auto ps = g.parents(n);
      finish[n.value] = ps.empty() ? 0.0 : finish[ps.front().value];
    } else {
      double ready_at = 0.0;
      for (NodeId p : g.parents(n)) {
        ready_at = std::max(ready_at, finish[p.value] + transfer_seconds(m, g.task(p).effort, device_of[p.value], step.device));
      }
      const double start = std::max(ready_at, device_free[step.device]);
      finish[n.value] = start + static_cast<double>(t.effort) / m.devices[step.device].flops_rate;
      device_free[step.device] = finish[n.value];
    }
    makespan = std::max(makespan, finish[n.value]);
  }
  return makespan;
}

}  // namespace cdag
