#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cdag/graph.hpp"

namespace cdag {

struct Device {
  std::string id;
  double flops_rate = 1e9;     // FLOP/s
  double mem_bandwidth = 1e10;  // byte/s
};

/// Devices and their interconnect. Transfers within one device are free.
struct Machine {
  std::vector<Device> devices;
  std::function<double(std::size_t, std::size_t)> transfer_rate;  // byte/s between distinct devices

  static Machine single(Device device = {"cpu0"});
  /// `count` identical devices joined by a uniform link.
  static Machine uniform(std::size_t count, Device prototype, double link_rate);

  double rate(std::size_t from, std::size_t to) const;
};

struct ScheduleStep {
  NodeId node;
  std::size_t device = 0;

  friend bool operator==(const ScheduleStep&, const ScheduleStep&) = default;
};

/// Topological order of all nodes with a device per node.
struct Schedule {
  std::vector<ScheduleStep> steps;
};

/// One device: topological order, all on device 0. Several devices:
/// earliest-estimated-finish list scheduling of compute nodes (lowest id first
/// among ready nodes, lowest device index on ties). Data nodes follow their
/// producer; entry nodes sit on device 0.
Schedule schedule(const Cdag& g, const Machine& m);

/// Throws InvalidSchedule unless `s` is a topological order of all of `g`'s nodes.
void check_schedule(const Cdag& g, const Schedule& s, std::size_t device_count = 0);

/// Critical-path estimate in seconds: c / flops_rate per compute node,
/// d / transfer_rate for data crossing devices (charged at the consumer),
/// zero for same-device data, devices run one compute node at a time.
double estimate_runtime(const Cdag& g, const Schedule& s, const Machine& m);

}  // namespace cdag
