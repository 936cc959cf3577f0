#pragma once

#include "cdag/graph.hpp"
#include "cdag/kernel.hpp"

namespace cdag::models {

/// The three-task example function (5 x2 - 2) sin(exp(x1)).
///
///   x1 -> exp  -> x3 --+
///                      mul_sin -> x5
///   x2 -> 5x-2 -> x4 --+
///
/// x1 and x2 bind inputs 0 and 1.
Cdag example_graph();

/// math.exp, math.affine {a, b}, math.mul_sin (x, y) -> y sin(x).
KernelRegistry example_kernels();

}  // namespace cdag::models
