#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

#include "json.hpp"

namespace cdag {

using Json = nlohmann::json;

enum class TaskKind : std::uint8_t { Data, Compute };

std::string_view to_string(TaskKind kind) noexcept;

constexpr TaskKind opposite(TaskKind kind) noexcept {
  return kind == TaskKind::Data ? TaskKind::Compute : TaskKind::Data;
}

/// What a node computes (compute) or transports (data). Two descriptors denote
/// the same task iff kind, kernel and params agree; the effort then agrees too.
///
/// `effort` is FLOPs for compute tasks and bytes for data tasks.
struct TaskDescriptor {
  TaskKind kind = TaskKind::Data;
  std::string kernel;
  Json params = Json::object();
  std::uint64_t effort = 0;

  bool same_task(const TaskDescriptor& other) const {
    return kind == other.kind && kernel == other.kernel && params == other.params;
  }
};

inline TaskDescriptor data_task(std::string kernel, std::uint64_t bytes, Json params = Json::object()) {
  return {TaskKind::Data, std::move(kernel), std::move(params), bytes};
}

inline TaskDescriptor compute_task(std::string kernel, std::uint64_t flops, Json params = Json::object()) {
  return {TaskKind::Compute, std::move(kernel), std::move(params), flops};
}

/// Parameter key binding an entry data node to a position of the input record.
inline constexpr const char* kInputIndexKey = "input_index";

struct NodeId {
  std::uint64_t value = 0;

  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

}  // namespace cdag

template <>
struct std::hash<cdag::NodeId> {
  std::size_t operator()(cdag::NodeId id) const noexcept { return std::hash<std::uint64_t>{}(id.value); }
};
