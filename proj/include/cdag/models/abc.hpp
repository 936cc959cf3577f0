#pragma once

// Scalar toy theory with particles A, B, C and a single A-B-C vertex. The
// process A + n B -> A + B has the same diagram structure as n-photon Compton
// scattering with only scalar arithmetic in the kernels. Valid for odd n.

#include <string>
#include <vector>

#include "cdag/graph.hpp"
#include "cdag/kernel.hpp"
#include "cdag/models/line_diagrams.hpp"
#include "cdag/models/phase_space.hpp"

namespace cdag::abc {

enum class Species { A, B, C };

struct AbcConfig {
  double g = 0.1;
  double m_a = 1.0;
  double m_b = 1.0;
  double m_c = 1.0;
};

struct AbcProcess {
  std::size_t n = 1;  // incoming B
  AbcConfig config;
  models::ReuseMode reuse = models::ReuseMode::BaseStates;
  bool amplitude_output = false;
};

/// Species of the line after absorbing the externals in `absorbed` (which
/// includes the line's own external): C after an odd number of B, else A.
Species line_species(std::uint64_t absorbed);

SubdiagramState abc_base_state(double mass, bool incoming, std::size_t index, const FourMomentum& p);
SubdiagramState abc_vertex(const SubdiagramState& b, const SubdiagramState& line, double g);
SubdiagramState abc_propagate(const SubdiagramState& state, const AbcConfig& config);
/// Joins the two line halves, propagating the half holding external 0.
Complex abc_join(const SubdiagramState& a, const SubdiagramState& b, std::uint64_t all, const AbcConfig& config);

/// abc.U, abc.V, abc.S1, abc.S2, abc.Sum.
KernelRegistry abc_kernels();

struct KernelEfforts {
  static constexpr std::uint64_t u = 1, v = 12, s1 = 16, s2 = 22;
};

/// Throws InvalidProcess for even n.
Cdag generate_ab_dag(const AbcProcess& proc);

/// Direct sum of vertex and propagator factors over all (n+1)! orderings.
Complex abc_oracle_amplitude(const AbcProcess& proc, const std::vector<FourMomentum>& momenta);

std::vector<FourMomentum> sample_abc_phase_space(const AbcProcess& proc, std::uint64_t seed,
                                                 const models::PhaseSpaceConfig& config = {});

/// n from "A B^n -> A B" ("A B -> A B" means n = 1).
std::size_t parse_abc_process(const std::string& text);

}  // namespace cdag::abc
