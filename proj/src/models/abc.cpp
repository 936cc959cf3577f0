#include "cdag/models/abc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <regex>

#include "cdag/error.hpp"

namespace cdag::abc {

namespace {

constexpr double kSingularTolerance = 1e-12;

double species_mass(Species s, const AbcConfig& c) {
  switch (s) {
    case Species::A: return c.m_a;
    case Species::B: return c.m_b;
    case Species::C: return c.m_c;
  }
  return c.m_a;
}

Complex propagator_factor(const FourMomentum& q, double mass) {
  const double d = qed::minkowski_square(q) - mass * mass;
  if (std::abs(d) <= kSingularTolerance) {
    throw Error(ErrorCode::NearSingularPropagator, "propagator denominator " + std::to_string(d) + " is near zero");
  }
  return {0.0, 1.0 / d};
}

const Complex& scalar_of(const SubdiagramState& s) {
  if (const auto* v = std::get_if<Complex>(&s.value)) return *v;
  throw Error(ErrorCode::KindMismatch, "scalar state expected");
}

AbcConfig config_from(const Json& p) {
  AbcConfig c;
  c.g = p.value("g", c.g);
  c.m_a = p.value("m_a", c.m_a);
  c.m_b = p.value("m_b", c.m_b);
  c.m_c = p.value("m_c", c.m_c);
  return c;
}

Json config_json(const AbcConfig& c) { return {{"g", c.g}, {"m_a", c.m_a}, {"m_c", c.m_c}}; }

}  // namespace

Species line_species(std::uint64_t absorbed) {
  return (std::popcount(absorbed) - 1) % 2 ? Species::C : Species::A;
}

SubdiagramState abc_base_state(double mass, bool incoming, std::size_t index, const FourMomentum& p) {
  if (std::abs(qed::minkowski_square(p) - mass * mass) > 1e-8 * std::max(1.0, p(0) * p(0))) {
    throw Error(ErrorCode::OffShell, "momentum is off shell");
  }
  if (index >= 64) throw Error(ErrorCode::InvalidProcess, "external index too large");
  SubdiagramState s;
  s.value = Complex(1.0, 0.0);
  s.momentum = incoming ? p : FourMomentum(-p);
  s.absorbed = std::uint64_t{1} << index;
  return s;
}

SubdiagramState abc_vertex(const SubdiagramState& b, const SubdiagramState& line, double g) {
  if (b.absorbed & line.absorbed) throw Error(ErrorCode::OverlappingAbsorbedSets, "states share absorbed externals");
  SubdiagramState out;
  out.value = Complex(0.0, -g) * scalar_of(b) * scalar_of(line);
  out.momentum = b.momentum + line.momentum;
  out.absorbed = b.absorbed | line.absorbed;
  return out;
}

SubdiagramState abc_propagate(const SubdiagramState& state, const AbcConfig& config) {
  SubdiagramState out = state;
  out.value = scalar_of(state) * propagator_factor(state.momentum, species_mass(line_species(state.absorbed), config));
  return out;
}

Complex abc_join(const SubdiagramState& a, const SubdiagramState& b, std::uint64_t all, const AbcConfig& config) {
  if (a.absorbed & b.absorbed) throw Error(ErrorCode::OverlappingAbsorbedSets, "states share absorbed externals");
  if ((a.absorbed | b.absorbed) != all) throw Error(ErrorCode::IncompleteDiagram, "join does not cover all externals");
  const SubdiagramState& in_side = (a.absorbed & 1u) ? a : b;
  const Complex prop = propagator_factor(in_side.momentum, species_mass(line_species(in_side.absorbed), config));
  return scalar_of(a) * prop * scalar_of(b);
}

KernelRegistry abc_kernels() {
  KernelRegistry r;
  r.add("abc.U", [](const Json& p) -> KernelFn {
    const double mass = p.value("mass", 1.0);
    const bool incoming = p.value("direction", std::string("in")) == "in";
    const std::size_t index = p.value("index", std::size_t{0});
    return [=](KernelArgs a) -> Value {
      require_arity(a, 1, "abc.U");
      return abc_base_state(mass, incoming, index, arg<FourMomentum>(a, 0, "abc.U"));
    };
  });
  r.add("abc.V", [](const Json& p) -> KernelFn {
    const double g = p.value("g", AbcConfig{}.g);
    return [g](KernelArgs a) -> Value {
      require_arity(a, 2, "abc.V");
      return abc_vertex(arg<SubdiagramState>(a, 0, "abc.V"), arg<SubdiagramState>(a, 1, "abc.V"), g);
    };
  });
  r.add("abc.S1", [](const Json& p) -> KernelFn {
    const AbcConfig c = config_from(p);
    return [c](KernelArgs a) -> Value {
      require_arity(a, 1, "abc.S1");
      return abc_propagate(arg<SubdiagramState>(a, 0, "abc.S1"), c);
    };
  });
  r.add("abc.S2", [](const Json& p) -> KernelFn {
    const AbcConfig c = config_from(p);
    const std::uint64_t all = p.value("all", std::uint64_t{0});
    return [c, all](KernelArgs a) -> Value {
      require_arity(a, 2, "abc.S2");
      return abc_join(arg<SubdiagramState>(a, 0, "abc.S2"), arg<SubdiagramState>(a, 1, "abc.S2"), all, c);
    };
  });
  r.add("abc.Sum", [](const Json& p) -> KernelFn {
    const bool amplitude = p.value("output", std::string("squared")) == "amplitude";
    return [amplitude](KernelArgs a) -> Value {
      if (a.empty()) throw Error(ErrorCode::KernelMismatch, "abc.Sum: no arguments");
      Complex s = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) s += arg<Complex>(a, i, "abc.Sum");
      if (amplitude) return s;
      return std::norm(s);
    };
  });
  return r;
}

Cdag generate_ab_dag(const AbcProcess& proc) {
  if (proc.n % 2 == 0) {
    throw Error(ErrorCode::InvalidProcess, "A B^n -> A B has tree-level diagrams only for odd n, got " +
                                               std::to_string(proc.n));
  }
  const AbcConfig& c = proc.config;
  models::LineKernels k;
  k.prefix = "abc";
  k.u_effort = KernelEfforts::u;
  k.v_effort = KernelEfforts::v;
  k.s1_effort = KernelEfforts::s1;
  k.s2_effort = KernelEfforts::s2;
  k.momentum_bytes = 32;
  k.state_bytes = 16;
  k.scalar_bytes = 16;
  k.output_bytes = proc.amplitude_output ? 16 : 8;
  k.v_params = {{"g", c.g}};
  k.s1_params = config_json(c);
  k.s2_params = config_json(c);
  k.sum_params = {{"output", proc.amplitude_output ? "amplitude" : "squared"}};
  const std::size_t n = proc.n;
  for (std::size_t i = 0; i < models::external_count(n); ++i) {
    const bool line = i == 0 || i == n + 1;
    k.u_params.push_back({{"particle", line ? "A" : "B"},
                          {"direction", (i <= n) ? "in" : "out"},
                          {"index", i},
                          {"mass", line ? c.m_a : c.m_b}});
  }
  return models::generate_line_dag(k, n, proc.reuse);
}

Complex abc_oracle_amplitude(const AbcProcess& proc, const std::vector<FourMomentum>& momenta) {
  const std::size_t n = proc.n;
  if (n % 2 == 0) throw Error(ErrorCode::InvalidProcess, "even n has no tree-level diagrams");
  if (momenta.size() != models::external_count(n)) throw Error(ErrorCode::InvalidProcess, "wrong momentum count");
  const AbcConfig& c = proc.config;
  auto order = models::boson_indices(n);
  Complex total = 0.0;
  do {
    Complex v = 1.0;
    FourMomentum q = momenta[0];
    for (std::size_t j = 0; j < order.size(); ++j) {
      v *= Complex(0.0, -c.g);
      q += order[j] <= n ? momenta[order[j]] : FourMomentum(-momenta[order[j]]);
      if (j + 1 < order.size()) {
        const double m = (j % 2 == 0) ? c.m_c : c.m_a;  // after j+1 absorbed B
        const double d = qed::minkowski_square(q) - m * m;
        if (std::abs(d) <= kSingularTolerance) throw Error(ErrorCode::NearSingularPropagator, "near-singular");
        v *= Complex(0.0, 1.0 / d);
      }
    }
    total += v;
  } while (std::next_permutation(order.begin(), order.end()));
  return total;
}

std::vector<FourMomentum> sample_abc_phase_space(const AbcProcess& proc, std::uint64_t seed,
                                                 const models::PhaseSpaceConfig& config) {
  std::vector<double> in(proc.n + 1, proc.config.m_b);
  in[0] = proc.config.m_a;
  return models::sample_two_body(in, {proc.config.m_a, proc.config.m_b}, seed, config);
}

std::size_t parse_abc_process(const std::string& text) {
  static const std::regex re(R"(^\s*A\s+B(\^(\d+))?\s*->\s*A\s+B\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) {
    throw Error(ErrorCode::Parse, "expected a process of the form 'A B^n -> A B', got '" + text + "'");
  }
  return m[2].matched ? std::stoul(m[2].str()) : 1;
}

}  // namespace cdag::abc
