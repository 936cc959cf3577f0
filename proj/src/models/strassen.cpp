#include "cdag/models/strassen.hpp"

#include <bit>

#include "cdag/error.hpp"

namespace cdag::strassen {

namespace {

std::uint64_t block_bytes(std::size_t b) { return 8 * b * b; }

class Builder {
 public:
  Cdag g;

  NodeId op(const std::string& kernel, std::uint64_t flops, Json params, std::initializer_list<NodeId> args,
            std::size_t out_dim) {
    auto c = g.add_node(compute_task("strassen." + kernel, flops, std::move(params)));
    for (NodeId a : args) g.add_edge(a, c);
    auto d = g.add_node(data_task("strassen.block", block_bytes(out_dim), {{"b", out_dim}}));
    g.add_edge(c, d);
    return d;
  }

  NodeId multiply(NodeId x, NodeId y, std::size_t m, std::size_t cutoff) {
    if (m == cutoff) return op("MultBase", 2 * m * m * m, {{"b", m}}, {x, y}, m);
    const std::size_t b = m / 2;
    const std::uint64_t e = b * b;
    auto sl = [&](NodeId src, int r, int c) { return op("Slice", 0, {{"row", r}, {"col", c}, {"b", b}}, {src}, b); };
    auto add = [&](NodeId p, NodeId q) { return op("Add", e, {{"b", b}}, {p, q}, b); };
    auto sub = [&](NodeId p, NodeId q) { return op("Sub", e, {{"b", b}}, {p, q}, b); };

    NodeId a11 = sl(x, 0, 0), a12 = sl(x, 0, 1), a21 = sl(x, 1, 0), a22 = sl(x, 1, 1);
    NodeId b11 = sl(y, 0, 0), b12 = sl(y, 0, 1), b21 = sl(y, 1, 0), b22 = sl(y, 1, 1);

    NodeId m1 = multiply(add(a11, a22), add(b11, b22), b, cutoff);
    NodeId m2 = multiply(add(a21, a22), b11, b, cutoff);
    NodeId m3 = multiply(a11, sub(b12, b22), b, cutoff);
    NodeId m4 = multiply(a22, sub(b21, b11), b, cutoff);
    NodeId m5 = multiply(add(a11, a12), b22, b, cutoff);
    NodeId m6 = multiply(sub(a21, a11), add(b11, b12), b, cutoff);
    NodeId m7 = multiply(sub(a12, a22), add(b21, b22), b, cutoff);
    return op("Assemble", 8 * e, {{"b", b}}, {m1, m2, m3, m4, m5, m6, m7}, m);
  }
};

void require_same(const Matrix& x, const Matrix& y, const char* what) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": operand shapes differ");
  }
}

const Matrix& block_arg(KernelArgs a, std::size_t i, const char* kernel) { return arg<Matrix>(a, i, kernel); }

}  // namespace

void check_config(const StrassenConfig& cfg) {
  if (cfg.cutoff < 1 || cfg.n < cfg.cutoff || cfg.n % cfg.cutoff != 0 || !std::has_single_bit(cfg.n / cfg.cutoff)) {
    throw Error(ErrorCode::BadDimensions, "need n >= cutoff >= 1 with n / cutoff a power of two (n = " +
                                              std::to_string(cfg.n) + ", cutoff = " + std::to_string(cfg.cutoff) + ")");
  }
}

std::size_t recursion_depth(const StrassenConfig& cfg) {
  check_config(cfg);
  return std::countr_zero(cfg.n / cfg.cutoff);
}

Cdag generate_strassen_dag(const StrassenConfig& cfg) {
  check_config(cfg);
  Builder b;
  const std::uint64_t bytes = block_bytes(cfg.n);
  NodeId a = b.g.add_node(data_task("strassen.matrix", bytes, {{kInputIndexKey, 0}, {"n", cfg.n}}));
  NodeId bb = cfg.same_inputs ? a : b.g.add_node(data_task("strassen.matrix", bytes, {{kInputIndexKey, 1}, {"n", cfg.n}}));
  b.multiply(a, bb, cfg.n, cfg.cutoff);
  return std::move(b.g);
}

Matrix slice(const Matrix& m, int row, int col) {
  if (row < 0 || row > 1 || col < 0 || col > 1) throw Error(ErrorCode::OutOfBounds, "slice quadrant out of range");
  if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0) {
    throw Error(ErrorCode::OutOfBounds, "slice needs a square matrix of even dimension");
  }
  const Eigen::Index h = m.rows() / 2;
  return m.block(row * h, col * h, h, h);
}

Matrix add(const Matrix& x, const Matrix& y) {
  require_same(x, y, "Add");
  return x + y;
}

Matrix sub(const Matrix& x, const Matrix& y) {
  require_same(x, y, "Sub");
  return x - y;
}

Matrix mult_base(const Matrix& x, const Matrix& y) {
  if (x.cols() != y.rows()) throw Error(ErrorCode::DimensionMismatch, "MultBase: operands not conformable");
  return x * y;
}

Matrix assemble(const Matrix& m1, const Matrix& m2, const Matrix& m3, const Matrix& m4, const Matrix& m5,
                const Matrix& m6, const Matrix& m7) {
  for (const Matrix* m : {&m2, &m3, &m4, &m5, &m6, &m7}) require_same(m1, *m, "Assemble");
  const Eigen::Index b = m1.rows();
  Matrix c(2 * b, 2 * b);
  c.topLeftCorner(b, b) = m1 + m4 - m5 + m7;
  c.topRightCorner(b, b) = m3 + m5;
  c.bottomLeftCorner(b, b) = m2 + m4;
  c.bottomRightCorner(b, b) = m1 - m2 + m3 + m6;
  return c;
}

KernelRegistry strassen_kernels() {
  KernelRegistry r;
  r.add("strassen.Slice", [](const Json& p) -> KernelFn {
    const int row = p.value("row", -1), col = p.value("col", -1);
    return [row, col](KernelArgs a) -> Value {
      require_arity(a, 1, "strassen.Slice");
      return slice(block_arg(a, 0, "strassen.Slice"), row, col);
    };
  });
  r.add_simple("strassen.Add", [](KernelArgs a) -> Value {
    require_arity(a, 2, "strassen.Add");
    return add(block_arg(a, 0, "strassen.Add"), block_arg(a, 1, "strassen.Add"));
  });
  r.add_simple("strassen.Sub", [](KernelArgs a) -> Value {
    require_arity(a, 2, "strassen.Sub");
    return sub(block_arg(a, 0, "strassen.Sub"), block_arg(a, 1, "strassen.Sub"));
  });
  r.add_simple("strassen.MultBase", [](KernelArgs a) -> Value {
    require_arity(a, 2, "strassen.MultBase");
    return mult_base(block_arg(a, 0, "strassen.MultBase"), block_arg(a, 1, "strassen.MultBase"));
  });
  r.add_simple("strassen.Assemble", [](KernelArgs a) -> Value {
    require_arity(a, 7, "strassen.Assemble");
    const char* k = "strassen.Assemble";
    return assemble(block_arg(a, 0, k), block_arg(a, 1, k), block_arg(a, 2, k), block_arg(a, 3, k), block_arg(a, 4, k),
                    block_arg(a, 5, k), block_arg(a, 6, k));
  });
  return r;
}

Matrix naive_multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "operands not conformable");
  Matrix c = Matrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k)
      for (Eigen::Index j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
  return c;
}

}  // namespace cdag::strassen
