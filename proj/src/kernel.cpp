#include "cdag/kernel.hpp"

namespace cdag {

void KernelRegistry::add(std::string tag, KernelFactory factory) { factories_[std::move(tag)] = std::move(factory); }

void KernelRegistry::add_simple(std::string tag, KernelFn fn) {
  add(std::move(tag), [fn = std::move(fn)](const Json&) { return fn; });
}

KernelFn KernelRegistry::resolve(const std::string& tag, const Json& params) const {
  auto it = factories_.find(tag);
  if (it == factories_.end()) throw Error(ErrorCode::UnknownKernel, "no kernel registered for '" + tag + "'");
  return it->second(params);
}

void KernelRegistry::merge(const KernelRegistry& other) {
  for (const auto& [tag, factory] : other.factories_) factories_[tag] = factory;
}

}  // namespace cdag
