#include "cdag/models/example.hpp"

#include <cmath>

namespace cdag::models {

Cdag example_graph() {
  Cdag g;
  auto x1 = g.add_node(data_task("real", 8, {{kInputIndexKey, 0}}));
  auto x2 = g.add_node(data_task("real", 8, {{kInputIndexKey, 1}}));
  auto t1 = g.add_node(compute_task("math.exp", 20));
  auto t2 = g.add_node(compute_task("math.affine", 2, {{"a", 5.0}, {"b", -2.0}}));
  auto x3 = g.add_node(data_task("real", 8));
  auto x4 = g.add_node(data_task("real", 8));
  auto t3 = g.add_node(compute_task("math.mul_sin", 21));
  auto x5 = g.add_node(data_task("real", 8));
  g.add_edge(x1, t1);
  g.add_edge(x2, t2);
  g.add_edge(t1, x3);
  g.add_edge(t2, x4);
  g.add_edge(x3, t3);
  g.add_edge(x4, t3);
  g.add_edge(t3, x5);
  return g;
}

KernelRegistry example_kernels() {
  KernelRegistry r;
  r.add_simple("math.exp", [](KernelArgs a) -> Value {
    require_arity(a, 1, "math.exp");
    return std::exp(arg<double>(a, 0, "math.exp"));
  });
  r.add("math.affine", [](const Json& p) -> KernelFn {
    const double s = p.value("a", 1.0), b = p.value("b", 0.0);
    return [s, b](KernelArgs a) -> Value {
      require_arity(a, 1, "math.affine");
      return s * arg<double>(a, 0, "math.affine") + b;
    };
  });
  r.add_simple("math.mul_sin", [](KernelArgs a) -> Value {
    require_arity(a, 2, "math.mul_sin");
    return arg<double>(a, 1, "math.mul_sin") * std::sin(arg<double>(a, 0, "math.mul_sin"));
  });
  return r;
}

}  // namespace cdag::models
