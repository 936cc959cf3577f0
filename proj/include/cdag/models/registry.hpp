#pragma once

#include "cdag/kernel.hpp"

namespace cdag::models {

/// Kernels of every bundled model: math.*, qed.*, abc.*, strassen.*.
const KernelRegistry& default_registry();

}  // namespace cdag::models
