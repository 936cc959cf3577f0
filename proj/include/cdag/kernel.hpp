#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>

#include "cdag/error.hpp"
#include "cdag/task.hpp"
#include "cdag/value.hpp"

namespace cdag {

using KernelArgs = std::span<const Value* const>;

/// A kernel with its parameters already decoded. Must be pure.
using KernelFn = std::function<Value(KernelArgs)>;

/// Decodes a node's params into a callable, once per plan.
using KernelFactory = std::function<KernelFn(const Json& params)>;

class KernelRegistry {
 public:
  void add(std::string tag, KernelFactory factory);
  /// Registers a parameter-free kernel.
  void add_simple(std::string tag, KernelFn fn);

  bool contains(const std::string& tag) const { return factories_.contains(tag); }
  KernelFn resolve(const std::string& tag, const Json& params) const;

  void merge(const KernelRegistry& other);

 private:
  std::map<std::string, KernelFactory> factories_;
};

/// Typed argument access; throws KernelMismatch on arity or kind mismatch.
template <typename T>
const T& arg(KernelArgs args, std::size_t i, std::string_view kernel) {
  if (i >= args.size()) {
    throw Error(ErrorCode::KernelMismatch, std::string(kernel) + ": missing argument " + std::to_string(i));
  }
  if (const T* v = std::get_if<T>(args[i])) return *v;
  throw Error(ErrorCode::KernelMismatch, std::string(kernel) + ": argument " + std::to_string(i) + " has kind " +
                                             std::string(value_kind(*args[i])));
}

inline void require_arity(KernelArgs args, std::size_t n, std::string_view kernel) {
  if (args.size() != n) {
    throw Error(ErrorCode::KernelMismatch, std::string(kernel) + ": expected " + std::to_string(n) + " arguments, got " +
                                               std::to_string(args.size()));
  }
}

}  // namespace cdag
