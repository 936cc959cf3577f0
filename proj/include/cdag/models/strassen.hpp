#pragma once

// Strassen block multiplication C = A B as a CDAG. Each recursion level slices
// both operands into quadrants, forms the seven Strassen products from 6 Add
// and 4 Sub tasks, and assembles C in one task. Below the cutoff MultBase
// does a dense product.

#include <cstdint>

#include "cdag/graph.hpp"
#include "cdag/kernel.hpp"

namespace cdag::strassen {

struct StrassenConfig {
  std::size_t n = 2;
  std::size_t cutoff = 1;
  /// Feed A into both operands (C = A A); exposes reducible Slice nodes.
  bool same_inputs = false;
};

/// Throws BadDimensions unless n >= cutoff >= 1 and n / cutoff is a power of two.
void check_config(const StrassenConfig& cfg);

/// Entries: A (input 0) and, unless same_inputs, B (input 1).
Cdag generate_strassen_dag(const StrassenConfig& cfg);

std::size_t recursion_depth(const StrassenConfig& cfg);

// Kernels. Slice quadrants are (row, col) in {0,1}.
Matrix slice(const Matrix& m, int row, int col);
Matrix add(const Matrix& x, const Matrix& y);
Matrix sub(const Matrix& x, const Matrix& y);
Matrix mult_base(const Matrix& x, const Matrix& y);
/// C11 = M1+M4-M5+M7, C12 = M3+M5, C21 = M2+M4, C22 = M1-M2+M3+M6.
Matrix assemble(const Matrix& m1, const Matrix& m2, const Matrix& m3, const Matrix& m4, const Matrix& m5,
                const Matrix& m6, const Matrix& m7);

/// strassen.Slice {row, col, b}, strassen.Add/Sub/MultBase/Assemble {b}.
KernelRegistry strassen_kernels();

/// Textbook triple loop, used as the reference product.
Matrix naive_multiply(const Matrix& a, const Matrix& b);

}  // namespace cdag::strassen
