#include "cdag/metrics.hpp"

#include <limits>

#include "cdag/error.hpp"

namespace cdag {

std::uint64_t graph_compute_effort(const Cdag& g) {
  std::uint64_t c = 0;
  g.for_each_node([&](NodeId id) {
    const auto& t = g.task(id);
    if (t.kind == TaskKind::Compute) c += t.effort;
  });
  return c;
}

std::uint64_t graph_data_transfer(const Cdag& g) {
  std::uint64_t d = 0;
  g.for_each_node([&](NodeId id) {
    const auto& t = g.task(id);
    if (t.kind == TaskKind::Data) d += t.effort * g.children(id).size();
  });
  return d;
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
  if (den != 0) return static_cast<double>(num) / static_cast<double>(den);
  return num == 0 ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

double graph_compute_intensity(const Cdag& g) { return ratio(graph_compute_effort(g), graph_data_transfer(g)); }

GraphMetrics graph_metrics(const Cdag& g) {
  GraphMetrics m;
  m.compute_effort = graph_compute_effort(g);
  m.data_transfer = graph_data_transfer(g);
  m.compute_intensity = ratio(m.compute_effort, m.data_transfer);
  return m;
}

std::uint64_t task_input_size(const Cdag& g, NodeId n) {
  if (g.kind(n) != TaskKind::Compute) throw Error(ErrorCode::NotAComputeNode, "node " + std::to_string(n.value));
  std::uint64_t d = 0;
  for (NodeId p : g.parents(n)) d += g.task(p).effort;
  return d;
}

double task_compute_intensity(const Cdag& g, NodeId n) {
  std::uint64_t di = task_input_size(g, n);
  if (di == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(g.task(n).effort) / static_cast<double>(di);
}

CostModel CostModel::unit() {
  auto one = [](const TaskDescriptor&) { return 1.0; };
  return {one, one};
}

CostModel CostModel::effort() {
  auto eff = [](const TaskDescriptor& t) { return static_cast<double>(t.effort); };
  return {eff, eff};
}

CostModel CostModel::device_rate(double flops_rate, double bandwidth) {
  return {[bandwidth](const TaskDescriptor& t) { return static_cast<double>(t.effort) / bandwidth; },
          [flops_rate](const TaskDescriptor& t) { return static_cast<double>(t.effort) / flops_rate; }};
}

double estimate_graph_cost(const Cdag& g, const CostModel& model) {
  double total = 0.0;
  g.for_each_node([&](NodeId id) { total += model(g.task(id)); });
  return total;
}

std::map<std::string, std::size_t> per_kernel_counts(const Cdag& g) {
  std::map<std::string, std::size_t> counts;
  g.for_each_node([&](NodeId id) {
    const auto& t = g.task(id);
    ++counts[t.kind == TaskKind::Data ? std::string("data") : t.kernel];
  });
  return counts;
}

}  // namespace cdag
