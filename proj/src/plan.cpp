#include "cdag/plan.hpp"

#include <algorithm>
#include <exception>
#include <thread>

#include "cdag/error.hpp"

namespace cdag {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

ExecutionPlan lower(const Cdag& g, const Schedule& s) {
  check_schedule(g, s);
  const auto exits = g.exit_nodes();
  if (exits.size() != 1) throw Error(ErrorCode::ValidationFailed, "graph must have exactly one exit node");

  ExecutionPlan plan;
  std::vector<Slot> slot_of(g.next_id().value, 0);
  plan.instructions.reserve(s.steps.size() + 1);
  plan.node_of_slot.reserve(s.steps.size());
  for (const auto& step : s.steps) {
    const NodeId n = step.node;
    const Slot out = plan.slot_count++;
    slot_of[n.value] = out;
    plan.node_of_slot.push_back(n);
    const auto& t = g.task(n);
    auto ps = g.parents(n);
    if (t.kind == TaskKind::Compute) {
      CallKernel call{t.kernel, t.params, {}, out};
      call.inputs.reserve(ps.size());
      for (NodeId p : ps) call.inputs.push_back(slot_of[p.value]);
      plan.instructions.emplace_back(std::move(call));
    } else if (ps.empty()) {
      auto it = t.params.find(kInputIndexKey);
      if (it == t.params.end() || !it->is_number_integer() || it->get<std::int64_t>() < 0) {
        throw Error(ErrorCode::UnboundEntry, "entry node " + std::to_string(n.value) + " has no input index");
      }
      plan.instructions.emplace_back(BindInput{it->get<std::size_t>(), out});
    } else {
      plan.instructions.emplace_back(Alias{slot_of[ps.front().value], out});
    }
  }
  plan.instructions.emplace_back(Return{slot_of[exits.front().value]});
  return plan;
}

void verify_ssa(const ExecutionPlan& plan) {
  std::vector<bool> written(plan.slot_count, false);
  std::size_t returns = 0;
  auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidSchedule, "SSA violation: " + why); };
  auto read = [&](Slot s) {
    if (s >= plan.slot_count || !written[s]) fail("slot " + std::to_string(s) + " read before write");
  };
  auto write = [&](Slot s) {
    if (s >= plan.slot_count) fail("slot " + std::to_string(s) + " out of range");
    if (written[s]) fail("slot " + std::to_string(s) + " written twice");
    written[s] = true;
  };
  for (const auto& ins : plan.instructions) {
    std::visit(overloaded{[&](const BindInput& b) { write(b.output); },
                          [&](const CallKernel& c) {
                            for (Slot s : c.inputs) read(s);
                            write(c.output);
                          },
                          [&](const Alias& a) {
                            read(a.from);
                            write(a.to);
                          },
                          [&](const Return& r) {
                            read(r.slot);
                            ++returns;
                          }},
               ins);
  }
  if (returns != 1) fail("expected exactly one Return, found " + std::to_string(returns));
  if (!std::holds_alternative<Return>(plan.instructions.back())) fail("Return is not the last instruction");
}

nlohmann::ordered_json plan_to_json(const ExecutionPlan& plan) {
  nlohmann::ordered_json ins = nlohmann::ordered_json::array();
  for (const auto& i : plan.instructions) {
    nlohmann::ordered_json j;
    std::visit(overloaded{[&](const BindInput& b) {
                            j["op"] = "bind";
                            j["input"] = b.input_index;
                            j["out"] = b.output;
                          },
                          [&](const CallKernel& c) {
                            j["op"] = "call";
                            j["kernel"] = c.kernel;
                            j["params"] = c.params;
                            j["in"] = c.inputs;
                            j["out"] = c.output;
                          },
                          [&](const Alias& a) {
                            j["op"] = "alias";
                            j["from"] = a.from;
                            j["to"] = a.to;
                          },
                          [&](const Return& r) {
                            j["op"] = "return";
                            j["slot"] = r.slot;
                          }},
               i);
    ins.push_back(std::move(j));
  }
  nlohmann::ordered_json out;
  out["slot_count"] = plan.slot_count;
  out["instructions"] = std::move(ins);
  return out;
}

BoundPlan::BoundPlan(const ExecutionPlan& plan, const KernelRegistry& registry) {
  verify_ssa(plan);
  std::vector<std::uint32_t> storage_of(plan.slot_count, 0);
  std::uint32_t next = 0;
  for (const auto& ins : plan.instructions) {
    std::visit(overloaded{[&](const BindInput& b) {
                            storage_of[b.output] = next++;
                            steps_.push_back({true, static_cast<std::uint32_t>(binds_.size())});
                            binds_.push_back({b.input_index, storage_of[b.output]});
                            input_arity_ = std::max(input_arity_, b.input_index + 1);
                          },
                          [&](const CallKernel& c) {
                            storage_of[c.output] = next++;
                            Call call{registry.resolve(c.kernel, c.params), {}, storage_of[c.output], c.kernel};
                            for (Slot s : c.inputs) call.inputs.push_back(storage_of[s]);
                            max_arity_ = std::max(max_arity_, call.inputs.size());
                            steps_.push_back({false, static_cast<std::uint32_t>(calls_.size())});
                            calls_.push_back(std::move(call));
                          },
                          [&](const Alias& a) { storage_of[a.to] = storage_of[a.from]; },
                          [&](const Return& r) { result_ = storage_of[r.slot]; }},
               ins);
  }
  storage_size_ = next;
}

Value BoundPlan::run(const InputRecord& input) const {
  Arena arena;
  return run(input, arena);
}

Value BoundPlan::run(const InputRecord& input, Arena& arena) const {
  if (input.size() < input_arity_) {
    throw Error(ErrorCode::KernelMismatch, "input record has " + std::to_string(input.size()) + " values, plan needs " +
                                               std::to_string(input_arity_));
  }
  arena.storage.resize(storage_size_);
  arena.args.resize(max_arity_);
  for (const Step& step : steps_) {
    if (step.is_bind) {
      const Bind& b = binds_[step.index];
      arena.storage[b.storage] = input[b.input_index];
    } else {
      const Call& c = calls_[step.index];
      for (std::size_t i = 0; i < c.inputs.size(); ++i) arena.args[i] = &arena.storage[c.inputs[i]];
      arena.storage[c.storage] = c.fn(KernelArgs(arena.args.data(), c.inputs.size()));
    }
  }
  return arena.storage[result_];
}

Value execute(const ExecutionPlan& plan, const KernelRegistry& kernels, const InputRecord& input) {
  return BoundPlan(plan, kernels).run(input);
}

std::vector<SampleResult> execute_batch(const BoundPlan& plan, std::span<const InputRecord> inputs,
                                        std::size_t workers) {
  std::vector<SampleResult> results(inputs.size());
  auto work = [&](std::size_t first, std::size_t stride) {
    BoundPlan::Arena arena;
    for (std::size_t i = first; i < inputs.size(); i += stride) {
      try {
        results[i].value = plan.run(inputs[i], arena);
      } catch (const Error& e) {
        results[i].error = e.code();
        results[i].message = e.what();
      } catch (const std::exception& e) {
        results[i].error = ErrorCode::NumericFailure;
        results[i].message = e.what();
      }
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, inputs.size()));
  if (workers == 1) {
    work(0, 1);
    return results;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  for (auto& t : pool) t.join();
  return results;
}

std::vector<SampleResult> execute_batch(const ExecutionPlan& plan, const KernelRegistry& kernels,
                                        std::span<const InputRecord> inputs, std::size_t workers) {
  return execute_batch(BoundPlan(plan, kernels), inputs, workers);
}

Value evaluate(const Cdag& g, const KernelRegistry& kernels, const InputRecord& input) {
  return execute(lower(g, schedule(g, Machine::single())), kernels, input);
}

}  // namespace cdag
