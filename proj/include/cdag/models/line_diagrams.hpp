#pragma once

// Tree-level diagrams of one open fermion-like line absorbing n+1 bosons,
// shared by the QED Compton and the scalar ABC generators.
//
// External indices: 0 line in, 1..n bosons in, n+1 line out, n+2 boson out.
// Each diagram is an attachment order of the n+1 bosons. The line-in side
// absorbs the first ceil((n+1)/2) of them, the line-out side the rest
// (attached from the end of the order), and S2 joins the two halves.

#include <cstdint>
#include <string>
#include <vector>

#include "cdag/graph.hpp"

namespace cdag::models {

enum class ReuseMode {
  BaseStates,   // share only the external base states; reduction finds the rest
  Subdiagrams,  // memoize partial lines by (side, ordered boson sequence)
};

struct LineKernels {
  std::string prefix;  // "qed" or "abc"
  std::uint64_t u_effort = 0, v_effort = 0, s1_effort = 0, s2_effort = 0;
  std::uint64_t momentum_bytes = 32, state_bytes = 64, scalar_bytes = 16, output_bytes = 8;
  Json v_params = Json::object();
  Json s1_params = Json::object();
  Json s2_params = Json::object();  // "all" is added by the generator
  Json sum_params = Json::object();  // "count" is added by the generator
  /// U params per external index.
  std::vector<Json> u_params;
};

/// Number of externals for n incoming bosons.
constexpr std::size_t external_count(std::size_t n) { return n + 3; }

/// Boson external indices in attachment-order enumeration order.
std::vector<std::size_t> boson_indices(std::size_t n);

/// Number of bosons absorbed on the line-in side.
constexpr std::size_t left_count(std::size_t n) { return (n + 2) / 2; }

/// Sum effort: 2(k-1) real adds plus 3 for the squared modulus.
std::uint64_t sum_effort(std::size_t count);

Cdag generate_line_dag(const LineKernels& k, std::size_t n, ReuseMode reuse);

}  // namespace cdag::models
