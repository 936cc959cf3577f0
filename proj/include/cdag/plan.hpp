#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cdag/graph.hpp"
#include "cdag/kernel.hpp"
#include "cdag/schedule.hpp"
#include "cdag/value.hpp"

namespace cdag {

using Slot = std::uint32_t;

struct BindInput {
  std::size_t input_index = 0;
  Slot output = 0;
};

struct CallKernel {
  std::string kernel;
  Json params;
  std::vector<Slot> inputs;
  Slot output = 0;
};

/// Same-device transport: the value of `from` is visible as `to`.
struct Alias {
  Slot from = 0;
  Slot to = 0;
};

struct Return {
  Slot slot = 0;
};

using Instruction = std::variant<BindInput, CallKernel, Alias, Return>;

/// Flat single-assignment instruction tape, one instruction per node plus a
/// final Return. `node_of_slot` maps slots back to graph nodes.
struct ExecutionPlan {
  std::vector<Instruction> instructions;
  std::uint32_t slot_count = 0;
  std::vector<NodeId> node_of_slot;
};

/// Entry nodes bind their input index, other data nodes alias their producer,
/// compute nodes call their kernel with arguments in declared order.
ExecutionPlan lower(const Cdag& g, const Schedule& s);

/// Throws InvalidSchedule describing the first SSA violation, if any.
void verify_ssa(const ExecutionPlan& plan);

nlohmann::ordered_json plan_to_json(const ExecutionPlan& plan);

/// Plan with kernels resolved against a registry and aliases collapsed, so
/// running it touches no maps and no graph.
class BoundPlan {
 public:
  BoundPlan(const ExecutionPlan& plan, const KernelRegistry& registry);

  std::size_t storage_size() const noexcept { return storage_size_; }
  std::size_t input_arity() const noexcept { return input_arity_; }

  /// Scratch space for one in-flight sample.
  struct Arena {
    std::vector<Value> storage;
    std::vector<const Value*> args;
  };

  Value run(const InputRecord& input) const;
  Value run(const InputRecord& input, Arena& arena) const;

 private:
  struct Bind {
    std::size_t input_index;
    std::uint32_t storage;
  };
  struct Call {
    KernelFn fn;
    std::vector<std::uint32_t> inputs;
    std::uint32_t storage;
    std::string kernel;
  };
  struct Step {
    bool is_bind;
    std::uint32_t index;
  };

  std::vector<Step> steps_;
  std::vector<Bind> binds_;
  std::vector<Call> calls_;
  std::uint32_t result_ = 0;
  std::size_t storage_size_ = 0;
  std::size_t input_arity_ = 0;
  std::size_t max_arity_ = 0;
};

Value execute(const ExecutionPlan& plan, const KernelRegistry& kernels, const InputRecord& input);

struct SampleResult {
  std::optional<Value> value;
  std::optional<ErrorCode> error;
  std::string message;

  bool ok() const noexcept { return value.has_value(); }
};

/// Elementwise execute; samples are split across `workers` threads with one
/// arena each. Errors are reported per sample.
std::vector<SampleResult> execute_batch(const BoundPlan& plan, std::span<const InputRecord> inputs,
                                        std::size_t workers = 1);
std::vector<SampleResult> execute_batch(const ExecutionPlan& plan, const KernelRegistry& kernels,
                                        std::span<const InputRecord> inputs, std::size_t workers = 1);

/// Lower with the single-device default schedule and execute once.
Value evaluate(const Cdag& g, const KernelRegistry& kernels, const InputRecord& input);

}  // namespace cdag
