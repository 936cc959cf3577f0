#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "cdag/graph.hpp"

namespace cdag {

struct GraphMetrics {
  std::uint64_t compute_effort = 0;  // C, FLOPs
  std::uint64_t data_transfer = 0;   // D, bytes
  double compute_intensity = 0.0;    // I = C / D
};

/// Sum of compute efforts.
std::uint64_t graph_compute_effort(const Cdag& g);
/// Sum over data nodes of size times out-degree.
std::uint64_t graph_data_transfer(const Cdag& g);
/// C / D; +inf when D == 0 < C and 0 for the empty 0/0 case.
double graph_compute_intensity(const Cdag& g);
GraphMetrics graph_metrics(const Cdag& g);

/// Sum of the sizes of a compute node's data parents.
std::uint64_t task_input_size(const Cdag& g, NodeId n);
/// effort / input size, +inf for an input size of 0.
double task_compute_intensity(const Cdag& g, NodeId n);

/// Seconds per task, split by task kind.
struct CostModel {
  std::function<double(const TaskDescriptor&)> data_cost;
  std::function<double(const TaskDescriptor&)> compute_cost;

  double operator()(const TaskDescriptor& t) const {
    return t.kind == TaskKind::Data ? data_cost(t) : compute_cost(t);
  }

  /// Every task costs 1.
  static CostModel unit();
  /// Every task costs its effort.
  static CostModel effort();
  /// compute: c / flops_rate, data: d / bandwidth.
  static CostModel device_rate(double flops_rate, double bandwidth);
};

double estimate_graph_cost(const Cdag& g, const CostModel& model);

/// Compute nodes counted by kernel tag, data nodes under "data".
std::map<std::string, std::size_t> per_kernel_counts(const Cdag& g);

}  // namespace cdag
