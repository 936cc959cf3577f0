#pragma once

#include <complex>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "cdag/qed/dirac.hpp"
#include "cdag/task.hpp"

namespace cdag {

using qed::FourMomentum;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;

using StateValue = std::variant<qed::BiSpinor, qed::AdjointBiSpinor, qed::LorentzVectorC, Complex>;

/// Partial Feynman diagram: its value, the signed sum of absorbed external
/// momenta (incoming +p, outgoing -p) and the absorbed external indices.
struct SubdiagramState {
  StateValue value;
  FourMomentum momentum = FourMomentum::Zero();
  std::uint64_t absorbed = 0;
};

/// Runtime content of a data node.
using Value = std::variant<double, Complex, FourMomentum, SubdiagramState, Matrix>;

/// One sample's entry values, indexed by the entry nodes' input index.
using InputRecord = std::vector<Value>;

std::string_view value_kind(const Value& v) noexcept;

/// Numbers, {"re","im"} objects, [E,px,py,pz] arrays and arrays of rows.
Json value_to_json(const Value& v);
Value value_from_json(const Json& j);
InputRecord input_record_from_json(const Json& j);

/// All components of a value as reals (complex split into re, im).
std::vector<double> flatten(const Value& v);

/// max |a_i - b_i| / max(max |a_i|, max |b_i|); +inf if shapes differ, 0 for two zero values.
double relative_difference(const Value& a, const Value& b);

}  // namespace cdag
