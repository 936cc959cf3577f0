#include "cdag/models/phase_space.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "cdag/error.hpp"

namespace cdag::models {

namespace {

Eigen::Vector3d random_direction(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double cos_theta = 2.0 * u(rng) - 1.0;
  const double phi = 2.0 * std::numbers::pi * u(rng);
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  return {sin_theta * std::cos(phi), sin_theta * std::sin(phi), cos_theta};
}

FourMomentum boost(const FourMomentum& p, const Eigen::Vector3d& beta) {
  const double b2 = beta.squaredNorm();
  if (b2 == 0.0) return p;
  const double gamma = 1.0 / std::sqrt(1.0 - b2);
  const Eigen::Vector3d v = p.tail<3>();
  const double bp = beta.dot(v);
  FourMomentum out;
  out(0) = gamma * (p(0) + bp);
  out.tail<3>() = v + ((gamma - 1.0) * bp / b2 + gamma * p(0)) * beta;
  return out;
}

}  // namespace

FourMomentum on_shell(double mass, const Eigen::Vector3d& p) {
  FourMomentum out;
  out << std::sqrt(p.squaredNorm() + mass * mass), p(0), p(1), p(2);
  return out;
}

std::vector<FourMomentum> sample_two_body(const std::vector<double>& in_masses, std::array<double, 2> out_masses,
                                          std::uint64_t seed, const PhaseSpaceConfig& config) {
  std::mt19937_64 rng(seed);
  std::vector<FourMomentum> out;
  FourMomentum total = FourMomentum::Zero();
  for (std::size_t i = 0; i < in_masses.size(); ++i) {
    const double lo = i == 0 ? 0.0 : config.boson_momentum_min;
    const double hi = i == 0 ? config.line_momentum_max : config.boson_momentum_max;
    const double mag = lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    out.push_back(on_shell(in_masses[i], mag * random_direction(rng)));
    total += out.back();
  }

  const double s = qed::minkowski_square(total);
  const double m1 = out_masses[0], m2 = out_masses[1];
  if (!(s > 0.0) || std::sqrt(s) - (m1 + m2) <= config.threshold_margin) {
    throw Error(ErrorCode::BelowThreshold, "sqrt(s) = " + std::to_string(std::sqrt(std::max(s, 0.0))) +
                                               " does not exceed the final-state masses");
  }
  const double rs = std::sqrt(s);
  const double lambda = (s - (m1 + m2) * (m1 + m2)) * (s - (m1 - m2) * (m1 - m2));
  const double q = std::sqrt(std::max(lambda, 0.0)) / (2.0 * rs);
  const FourMomentum p1 = boost(on_shell(m1, q * random_direction(rng)), total.tail<3>() / total(0));
  out.push_back(p1);
  out.push_back(total - p1);
  return out;
}

InputRecord to_input_record(const std::vector<FourMomentum>& momenta) {
  return InputRecord(momenta.begin(), momenta.end());
}

}  // namespace cdag::models
