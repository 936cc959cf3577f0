#pragma once

// Tree-level n-photon Compton scattering e- + n gamma -> e- + gamma with fixed
// spins and polarizations, as Feynman-rule kernels and a CDAG generator.

#include <optional>
#include <string>
#include <vector>

#include "cdag/graph.hpp"
#include "cdag/kernel.hpp"
#include "cdag/models/line_diagrams.hpp"
#include "cdag/models/phase_space.hpp"
#include "cdag/value.hpp"

namespace cdag::qed {

enum class Particle { Electron, Photon };
enum class Direction { In, Out };
/// Spin for electrons, linear polarization for photons. K replaces the
/// polarization vector by the photon momentum (Ward identity checks).
enum class State { Up, Down, X, Y, K };

struct BaseStateSpec {
  Particle particle = Particle::Electron;
  Direction direction = Direction::In;
  State state = State::Up;
  std::size_t index = 0;  // external index, sets the absorbed bit

  Json to_json() const;
  static BaseStateSpec from_json(const Json& j);
};

enum class SumOutput { Squared, Amplitude };

struct ComptonProcess {
  std::size_t n = 1;  // incoming photons
  bool spin_in_up = true;
  bool spin_out_up = true;
  /// Polarization per photon: n incoming then the outgoing one. Missing
  /// entries default to X.
  std::vector<State> polarizations;
  models::ReuseMode reuse = models::ReuseMode::BaseStates;
  SumOutput output = SumOutput::Squared;

  State polarization(std::size_t photon) const;
  /// Base state of external index i (0 e-in, 1..n gamma-in, n+1 e-out, n+2 gamma-out).
  BaseStateSpec external(std::size_t i) const;
};

inline const cdag::Complex kVertexFactor{0.0, -kElementaryCharge};
inline constexpr double kSingularTolerance = 1e-12;

// Feynman rules on single states. All throw cdag::Error.
SubdiagramState base_state(const BaseStateSpec& spec, const FourMomentum& p);
SubdiagramState vertex(const SubdiagramState& photon, const SubdiagramState& fermion);
SubdiagramState propagate(const SubdiagramState& state);
/// psi-bar S(Q) psi with Q the spinor side's momentum; argument order is free.
/// `all` is the bitmask of every external index.
cdag::Complex join(const SubdiagramState& a, const SubdiagramState& b, std::uint64_t all);
cdag::Complex sum_diagrams(const std::vector<cdag::Complex>& values);

/// qed.U, qed.V, qed.S1, qed.S2, qed.Sum.
KernelRegistry compton_kernels();

/// FLOPs per kernel invocation, used as node efforts.
struct KernelEfforts {
  static constexpr std::uint64_t u = 24, v = 156, s1 = 144, s2 = 174;
};

Cdag generate_compton_dag(const ComptonProcess& proc);

/// Direct sum over all (n+1)! photon orderings with explicit matrix products.
cdag::Complex oracle_amplitude(const ComptonProcess& proc, const std::vector<FourMomentum>& momenta);

/// External momenta in index order.
std::vector<FourMomentum> sample_phase_space(const ComptonProcess& proc, std::uint64_t seed,
                                             const models::PhaseSpaceConfig& config = {});

/// Photon count from "e- Ngamma -> e- gamma" (N may be omitted for 1).
std::size_t parse_compton_process(const std::string& text);

/// "x,y,x" or "1=x,3=y" style list for n+1 photons.
std::vector<State> parse_polarizations(const std::string& text, std::size_t photons);

}  // namespace cdag::qed
