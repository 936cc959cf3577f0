#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cdag/value.hpp"

namespace cdag::models {

struct PhaseSpaceConfig {
  /// Momentum magnitude ranges: the first incoming particle draws from
  /// [0, line_momentum_max], the others from [boson_momentum_min, boson_momentum_max].
  double line_momentum_max = 1.0;
  double boson_momentum_min = 0.2;
  double boson_momentum_max = 2.0;
  /// Required headroom of sqrt(s) above the summed final-state masses.
  double threshold_margin = 1e-6;
};

/// Random incoming momenta and a two-body final state built back to back in
/// the centre-of-mass frame, then boosted to the lab. The last outgoing
/// momentum is set to P_in - p_out[0], so conservation is exact up to
/// rounding. Returns incoming momenta followed by the two outgoing ones.
/// Throws BelowThreshold when sqrt(s) does not clear the final-state masses.
std::vector<FourMomentum> sample_two_body(const std::vector<double>& in_masses, std::array<double, 2> out_masses,
                                          std::uint64_t seed, const PhaseSpaceConfig& config = {});

FourMomentum on_shell(double mass, const Eigen::Vector3d& p);

InputRecord to_input_record(const std::vector<FourMomentum>& momenta);

}  // namespace cdag::models
