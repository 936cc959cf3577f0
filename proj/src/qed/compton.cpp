#include "cdag/qed/compton.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

#include "cdag/error.hpp"

namespace cdag::qed {

namespace {

const char* name(Particle p) { return p == Particle::Electron ? "electron" : "photon"; }
const char* name(Direction d) { return d == Direction::In ? "in" : "out"; }
const char* name(State s) {
  switch (s) {
    case State::Up: return "up";
    case State::Down: return "down";
    case State::X: return "x";
    case State::Y: return "y";
    case State::K: return "k";
  }
  return "?";
}

State state_from(const std::string& s) {
  if (s == "up") return State::Up;
  if (s == "down") return State::Down;
  if (s == "x") return State::X;
  if (s == "y") return State::Y;
  if (s == "k") return State::K;
  throw Error(ErrorCode::Parse, "unknown spin/polarization state '" + s + "'");
}

double mass_of(Particle p) { return p == Particle::Electron ? kElectronMass : 0.0; }

void check_singular(const FourMomentum& q) {
  const double d = minkowski_square(q) - kElectronMass * kElectronMass;
  if (std::abs(d) <= kSingularTolerance) {
    throw Error(ErrorCode::NearSingularPropagator, "propagator denominator " + std::to_string(d) + " is near zero");
  }
}

void check_disjoint(std::uint64_t a, std::uint64_t b) {
  if (a & b) throw Error(ErrorCode::OverlappingAbsorbedSets, "states share absorbed externals");
}

const SubdiagramState& state_arg(KernelArgs args, std::size_t i, std::string_view kernel) {
  return arg<SubdiagramState>(args, i, kernel);
}

}  // namespace

Json BaseStateSpec::to_json() const {
  return {{"particle", name(particle)}, {"direction", name(direction)}, {"state", name(state)}, {"index", index}};
}

BaseStateSpec BaseStateSpec::from_json(const Json& j) {
  BaseStateSpec s;
  try {
    s.particle = j.at("particle").get<std::string>() == "electron" ? Particle::Electron : Particle::Photon;
    s.direction = j.at("direction").get<std::string>() == "in" ? Direction::In : Direction::Out;
    s.state = state_from(j.at("state").get<std::string>());
    s.index = j.at("index").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::KernelMismatch, std::string("qed.U params: ") + e.what());
  }
  return s;
}

State ComptonProcess::polarization(std::size_t photon) const {
  return photon < polarizations.size() ? polarizations[photon] : State::X;
}

BaseStateSpec ComptonProcess::external(std::size_t i) const {
  if (i == 0) return {Particle::Electron, Direction::In, spin_in_up ? State::Up : State::Down, i};
  if (i <= n) return {Particle::Photon, Direction::In, polarization(i - 1), i};
  if (i == n + 1) return {Particle::Electron, Direction::Out, spin_out_up ? State::Up : State::Down, i};
  if (i == n + 2) return {Particle::Photon, Direction::Out, polarization(n), i};
  throw Error(ErrorCode::InvalidProcess, "external index " + std::to_string(i) + " out of range");
}

SubdiagramState base_state(const BaseStateSpec& spec, const FourMomentum& p) {
  const double m = mass_of(spec.particle);
  if (std::abs(minkowski_square(p) - m * m) > 1e-8 * std::max(1.0, p(0) * p(0))) {
    throw Error(ErrorCode::OffShell, std::string(name(spec.particle)) + " momentum is off shell");
  }
  if (spec.index >= 64) throw Error(ErrorCode::InvalidProcess, "external index too large");
  SubdiagramState s;
  s.absorbed = std::uint64_t{1} << spec.index;
  s.momentum = spec.direction == Direction::In ? p : FourMomentum(-p);
  if (spec.particle == Particle::Electron) {
    if (spec.state != State::Up && spec.state != State::Down) {
      throw Error(ErrorCode::KernelMismatch, "electrons take spin up or down");
    }
    BiSpinor u = dirac_spinor(p, m, spec.state == State::Up);
    if (spec.direction == Direction::In) {
      s.value = u;
    } else {
      s.value = dirac_adjoint(u);
    }
    return s;
  }
  LorentzVectorC eps;
  if (spec.state == State::K) {
    eps.components = p.cast<cdag::Complex>();
  } else if (spec.state == State::X || spec.state == State::Y) {
    eps = linear_polarization(p, spec.state == State::X);
  } else {
    throw Error(ErrorCode::KernelMismatch, "photons take polarization x, y or k");
  }
  if (spec.direction == Direction::Out) eps.components = eps.components.conjugate().eval();
  s.value = eps;
  return s;
}

SubdiagramState vertex(const SubdiagramState& photon, const SubdiagramState& fermion) {
  const auto* eps = std::get_if<LorentzVectorC>(&photon.value);
  if (!eps) throw Error(ErrorCode::KindMismatch, "vertex expects a photon state first");
  check_disjoint(photon.absorbed, fermion.absorbed);
  SubdiagramState out;
  out.momentum = photon.momentum + fermion.momentum;
  out.absorbed = photon.absorbed | fermion.absorbed;
  const DiracMatrix m = slash(eps->components);
  if (const auto* psi = std::get_if<BiSpinor>(&fermion.value)) {
    BiSpinor r;
    r.components = kVertexFactor * (m * psi->components);
    out.value = r;
  } else if (const auto* bar = std::get_if<AdjointBiSpinor>(&fermion.value)) {
    AdjointBiSpinor r;
    r.components = kVertexFactor * (bar->components * m);
    out.value = r;
  } else {
    throw Error(ErrorCode::KindMismatch, "vertex expects a fermion state second");
  }
  return out;
}

SubdiagramState propagate(const SubdiagramState& state) {
  SubdiagramState out = state;
  if (const auto* psi = std::get_if<BiSpinor>(&state.value)) {
    check_singular(state.momentum);
    BiSpinor r;
    r.components = propagator_matrix(state.momentum, kElectronMass) * psi->components;
    out.value = r;
  } else if (const auto* bar = std::get_if<AdjointBiSpinor>(&state.value)) {
    // The line momentum flows into the outgoing end, opposite to the absorbed sum.
    const FourMomentum q = -state.momentum;
    check_singular(q);
    AdjointBiSpinor r;
    r.components = bar->components * propagator_matrix(q, kElectronMass);
    out.value = r;
  } else {
    throw Error(ErrorCode::KindMismatch, "propagate expects a fermion state");
  }
  return out;
}

cdag::Complex join(const SubdiagramState& a, const SubdiagramState& b, std::uint64_t all) {
  const SubdiagramState* spinor = &a;
  const SubdiagramState* adjoint = &b;
  if (std::holds_alternative<AdjointBiSpinor>(a.value)) std::swap(spinor, adjoint);
  const auto* psi = std::get_if<BiSpinor>(&spinor->value);
  const auto* bar = std::get_if<AdjointBiSpinor>(&adjoint->value);
  if (!psi || !bar) throw Error(ErrorCode::KindMismatch, "join expects one spinor and one adjoint spinor");
  check_disjoint(a.absorbed, b.absorbed);
  if ((a.absorbed | b.absorbed) != all) throw Error(ErrorCode::IncompleteDiagram, "join does not cover all externals");
  check_singular(spinor->momentum);
  return (bar->components * (propagator_matrix(spinor->momentum, kElectronMass) * psi->components))(0, 0);
}

cdag::Complex sum_diagrams(const std::vector<cdag::Complex>& values) {
  cdag::Complex s = 0.0;
  for (const cdag::Complex& v : values) s += v;
  return s;
}

KernelRegistry compton_kernels() {
  KernelRegistry r;
  r.add("qed.U", [](const Json& p) -> KernelFn {
    const BaseStateSpec spec = BaseStateSpec::from_json(p);
    return [spec](KernelArgs a) -> Value {
      require_arity(a, 1, "qed.U");
      return base_state(spec, arg<FourMomentum>(a, 0, "qed.U"));
    };
  });
  r.add_simple("qed.V", [](KernelArgs a) -> Value {
    require_arity(a, 2, "qed.V");
    return vertex(state_arg(a, 0, "qed.V"), state_arg(a, 1, "qed.V"));
  });
  r.add_simple("qed.S1", [](KernelArgs a) -> Value {
    require_arity(a, 1, "qed.S1");
    return propagate(state_arg(a, 0, "qed.S1"));
  });
  r.add("qed.S2", [](const Json& p) -> KernelFn {
    const std::uint64_t all = p.value("all", std::uint64_t{0});
    return [all](KernelArgs a) -> Value {
      require_arity(a, 2, "qed.S2");
      return join(state_arg(a, 0, "qed.S2"), state_arg(a, 1, "qed.S2"), all);
    };
  });
  r.add("qed.Sum", [](const Json& p) -> KernelFn {
    const bool amplitude = p.value("output", std::string("squared")) == "amplitude";
    return [amplitude](KernelArgs a) -> Value {
      if (a.empty()) throw Error(ErrorCode::KernelMismatch, "qed.Sum: no arguments");
      cdag::Complex s = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) s += arg<cdag::Complex>(a, i, "qed.Sum");
      if (amplitude) return s;
      return std::norm(s);
    };
  });
  return r;
}

Cdag generate_compton_dag(const ComptonProcess& proc) {
  models::LineKernels k;
  k.prefix = "qed";
  k.u_effort = KernelEfforts::u;
  k.v_effort = KernelEfforts::v;
  k.s1_effort = KernelEfforts::s1;
  k.s2_effort = KernelEfforts::s2;
  k.momentum_bytes = 32;
  k.state_bytes = 64;
  k.scalar_bytes = 16;
  k.output_bytes = proc.output == SumOutput::Amplitude ? 16 : 8;
  k.sum_params = {{"output", proc.output == SumOutput::Amplitude ? "amplitude" : "squared"}};
  for (std::size_t i = 0; i < models::external_count(proc.n); ++i) k.u_params.push_back(proc.external(i).to_json());
  return models::generate_line_dag(k, proc.n, proc.reuse);
}

cdag::Complex oracle_amplitude(const ComptonProcess& proc, const std::vector<FourMomentum>& momenta) {
  const std::size_t n = proc.n;
  if (momenta.size() != models::external_count(n)) {
    throw Error(ErrorCode::InvalidProcess, "expected " + std::to_string(n + 3) + " momenta");
  }
  const Eigen::Matrix<cdag::Complex, 4, 1> u = dirac_spinor(momenta[0], kElectronMass, proc.spin_in_up).components;
  const Eigen::Matrix<cdag::Complex, 1, 4> ubar =
      dirac_adjoint(dirac_spinor(momenta[n + 1], kElectronMass, proc.spin_out_up)).components;

  std::vector<DiracMatrix> eps_slash(n + 3);
  std::vector<FourMomentum> signed_k(n + 3);
  for (std::size_t i : models::boson_indices(n)) {
    const bool incoming = i <= n;
    const State st = proc.polarization(incoming ? i - 1 : n);
    Eigen::Matrix<cdag::Complex, 4, 1> e;
    if (st == State::K) {
      e = momenta[i].cast<cdag::Complex>();
    } else {
      e = linear_polarization(momenta[i], st == State::X).components;
    }
    if (!incoming) e = e.conjugate().eval();
    eps_slash[i] = slash(e);
    signed_k[i] = incoming ? momenta[i] : FourMomentum(-momenta[i]);
  }

  auto order = models::boson_indices(n);
  cdag::Complex total = 0.0;
  do {
    Eigen::Matrix<cdag::Complex, 4, 1> v = u;
    FourMomentum q = momenta[0];
    for (std::size_t j = 0; j < order.size(); ++j) {
      v = kVertexFactor * (eps_slash[order[j]] * v);
      q += signed_k[order[j]];
      if (j + 1 < order.size()) {
        check_singular(q);
        v = propagator_matrix(q, kElectronMass) * v;
      }
    }
    total += (ubar * v)(0, 0);
  } while (std::next_permutation(order.begin(), order.end()));
  return total;
}

std::vector<FourMomentum> sample_phase_space(const ComptonProcess& proc, std::uint64_t seed,
                                             const models::PhaseSpaceConfig& config) {
  std::vector<double> in(proc.n + 1, 0.0);
  in[0] = kElectronMass;
  return models::sample_two_body(in, {kElectronMass, 0.0}, seed, config);
}

std::size_t parse_compton_process(const std::string& text) {
  static const std::regex re(R"(^\s*e-\s+(\d*)\s*gamma\s*->\s*e-\s+gamma\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) {
    throw Error(ErrorCode::Parse, "expected a process of the form 'e- Ngamma -> e- gamma', got '" + text + "'");
  }
  const std::size_t n = m[1].length() ? std::stoul(m[1].str()) : 1;
  if (n < 1) throw Error(ErrorCode::InvalidProcess, "at least one incoming photon required");
  return n;
}

std::vector<State> parse_polarizations(const std::string& text, std::size_t photons) {
  std::vector<State> out(photons, State::X);
  std::stringstream ss(text);
  std::string tok;
  std::size_t pos = 0;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t idx = pos++;
    std::string value = tok;
    if (auto eq = tok.find('='); eq != std::string::npos) {
      std::string key = tok.substr(0, eq);
      if (!key.empty() && key[0] == 'k') key.erase(0, 1);
      try {
        idx = std::stoul(key) - 1;
      } catch (const std::exception&) {
        throw Error(ErrorCode::Parse, "bad polarization key '" + tok + "'");
      }
      value = tok.substr(eq + 1);
    }
    if (idx >= photons) throw Error(ErrorCode::Parse, "polarization index out of range in '" + tok + "'");
    out[idx] = state_from(value);
  }
  return out;
}

}  // namespace cdag::qed
