#include "cdag/models/registry.hpp"

#include "cdag/models/abc.hpp"
#include "cdag/models/example.hpp"
#include "cdag/models/strassen.hpp"
#include "cdag/qed/compton.hpp"

namespace cdag::models {

const KernelRegistry& default_registry() {
  static const KernelRegistry registry = [] {
    KernelRegistry r = example_kernels();
    r.merge(qed::compton_kernels());
    r.merge(abc::abc_kernels());
    r.merge(strassen::strassen_kernels());
    return r;
  }();
  return registry;
}

}  // namespace cdag::models
