#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "cdag/canonical_hash.hpp"
#include "cdag/error.hpp"
#include "cdag/graph_ops.hpp"
#include "cdag/models/registry.hpp"
#include "cdag/plan.hpp"
#include "cdag/qed/compton.hpp"

using namespace cdag;
using namespace cdag::qed;

namespace {

using C = cdag::Complex;

FourMomentum random_on_shell(std::mt19937_64& rng, double mass) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return models::on_shell(mass, Eigen::Vector3d(u(rng), u(rng), u(rng)));
}

double max_abs(const DiracMatrix& m) { return m.cwiseAbs().maxCoeff(); }

template <class E>
ErrorCode code_of(E&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Usage;  // sentinel: nothing thrown
}

Value run(const ComptonProcess& p, const Cdag& g, const std::vector<FourMomentum>& mom) {
  return evaluate(g, models::default_registry(), models::to_input_record(mom));
}

double dot(const FourMomentum& a, const FourMomentum& b) { return minkowski_dot(a, b); }

}  // namespace

TEST_CASE("gamma matrices anticommute to the metric") {
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      DiracMatrix ac = gamma<double>(mu) * gamma<double>(nu) + gamma<double>(nu) * gamma<double>(mu);
      DiracMatrix expected = DiracMatrix::Zero();
      if (mu == nu) expected.diagonal().setConstant(2.0 * metric<double>(mu));
      CHECK(max_abs(ac - expected) <= 1e-14);
    }
  }
}

TEST_CASE("spinor normalization and spin sum") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    FourMomentum p = random_on_shell(rng, kElectronMass);
    CHECK(std::abs(minkowski_square(p) - 1.0) <= 1e-10);
    DiracMatrix sum = DiracMatrix::Zero();
    for (bool up : {true, false}) {
      BiSpinor u = dirac_spinor(p, kElectronMass, up);
      C norm = (dirac_adjoint(u).components * u.components)(0, 0);
      CHECK(std::abs(norm - C(2.0 * kElectronMass)) <= 1e-10);
      sum += u.components * dirac_adjoint(u).components;
    }
    DiracMatrix expected = slash(p);
    expected.diagonal().array() += C(kElectronMass);
    CHECK(max_abs(sum - expected) <= 1e-10);
  }
}

TEST_CASE("rest-frame spinor") {
  BiSpinor u = dirac_spinor(FourMomentum(1, 0, 0, 0), 1.0, true);
  CHECK(std::abs(u.components(0) - std::sqrt(2.0)) <= 1e-15);
  CHECK(std::abs(u.components(1)) == 0.0);
  CHECK(std::abs(u.components(2)) == 0.0);
  CHECK(std::abs(u.components(3)) == 0.0);
}

TEST_CASE("propagator identities") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 50; ++t) {
    FourMomentum q(u(rng) + 3.0, u(rng), u(rng), u(rng));
    DiracMatrix lhs = slash(q);
    lhs.diagonal().array() -= C(kElectronMass);
    DiracMatrix s = propagator_matrix(q, kElectronMass);
    DiracMatrix id = DiracMatrix::Identity() * C(0, 1);
    CHECK(max_abs(lhs * s - id) <= 1e-12 * std::max(1.0, max_abs(s)));

    SubdiagramState st;
    BiSpinor psi;
    psi.components = Eigen::Matrix<C, 4, 1>::Random();
    st.value = psi;
    st.momentum = q;
    SubdiagramState twice = propagate(propagate(st));
    Eigen::Matrix<C, 4, 1> expect = s * s * psi.components;
    CHECK((std::get<BiSpinor>(twice.value).components - expect).cwiseAbs().maxCoeff() <=
          1e-12 * std::max(1.0, expect.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("photon polarizations are transverse") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    FourMomentum k = random_on_shell(rng, 0.0);
    for (bool x : {true, false}) {
      LorentzVectorC e = linear_polarization(k, x);
      C ek = 0;
      for (int mu = 0; mu < 4; ++mu) ek += metric<double>(mu) * e.components(mu) * k(mu);
      CHECK(std::abs(ek) <= 1e-12);
      C ee = 0;
      for (int mu = 0; mu < 4; ++mu) ee += metric<double>(mu) * e.components(mu) * e.components(mu);
      CHECK(std::abs(ee + 1.0) <= 1e-12);
    }
  }
  // along z
  LorentzVectorC e = linear_polarization(FourMomentum(1, 0, 0, 1), true);
  CHECK(std::abs(e.components(1) - 1.0) <= 1e-15);
}

TEST_CASE("base states") {
  ComptonProcess p;
  FourMomentum pe(1, 0, 0, 0);
  SubdiagramState s = base_state(p.external(0), pe);
  CHECK(s.absorbed == 1);
  CHECK(std::holds_alternative<BiSpinor>(s.value));
  SubdiagramState out = base_state(p.external(2), pe);
  CHECK(out.absorbed == 4);
  CHECK(std::holds_alternative<AdjointBiSpinor>(out.value));
  CHECK(out.momentum(0) == -1.0);
  SubdiagramState ph = base_state(p.external(1), FourMomentum(2, 0, 2, 0));
  CHECK(std::holds_alternative<LorentzVectorC>(ph.value));
  CHECK(code_of([&] { base_state(p.external(0), FourMomentum(2, 0, 0, 0)); }) == ErrorCode::OffShell);
  CHECK(code_of([&] { base_state(p.external(1), FourMomentum(1, 0, 0, 0)); }) == ErrorCode::OffShell);
  BaseStateSpec round = BaseStateSpec::from_json(p.external(3).to_json());
  CHECK(round.particle == Particle::Photon);
  CHECK(round.direction == Direction::Out);
  CHECK(round.index == 3);
}

TEST_CASE("vertex examples") {
  ComptonProcess p;
  SubdiagramState u = base_state(p.external(0), FourMomentum(1, 0, 0, 0));
  SubdiagramState zero;
  zero.value = LorentzVectorC{};
  zero.absorbed = 2;
  SubdiagramState z = vertex(zero, u);
  CHECK(std::get<BiSpinor>(z.value).components.cwiseAbs().maxCoeff() == 0.0);
  CHECK(z.absorbed == 3);

  SubdiagramState time;
  LorentzVectorC e;
  e.components << C(1), C(0), C(0), C(0);
  time.value = e;
  time.absorbed = 2;
  time.momentum = FourMomentum(1, 0, 0, 1);
  SubdiagramState v = vertex(time, u);
  Eigen::Matrix<C, 4, 1> expect = kVertexFactor * (gamma<double>(0) * std::get<BiSpinor>(u.value).components);
  CHECK((std::get<BiSpinor>(v.value).components - expect).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(v.momentum == FourMomentum(2, 0, 0, 1));
  CHECK(code_of([&] { vertex(u, u); }) == ErrorCode::KindMismatch);
  CHECK(code_of([&] { vertex(time, v); }) == ErrorCode::OverlappingAbsorbedSets);
}

TEST_CASE("join") {
  ComptonProcess p;
  auto mom = sample_phase_space(p, 5);
  SubdiagramState u = base_state(p.external(0), mom[0]);
  SubdiagramState k = base_state(p.external(1), mom[1]);
  SubdiagramState ub = base_state(p.external(2), mom[2]);
  SubdiagramState k2 = base_state(p.external(3), mom[3]);
  SubdiagramState a = vertex(k, u);
  SubdiagramState b = vertex(k2, ub);
  const std::uint64_t all = 15;
  C ab = join(a, b, all);
  CHECK(ab == join(b, a, all));
  // propagate-then-contract
  SubdiagramState pa = propagate(a);
  C direct = (std::get<AdjointBiSpinor>(b.value).components * std::get<BiSpinor>(pa.value).components)(0, 0);
  CHECK(std::abs(ab - direct) <= 1e-14 * std::abs(ab));
  CHECK(code_of([&] { join(a, b, 31); }) == ErrorCode::IncompleteDiagram);
  CHECK(code_of([&] { join(a, a, all); }) == ErrorCode::KindMismatch);
  CHECK(sum_diagrams({ab}) == ab);
  CHECK(sum_diagrams({ab, -ab}) == C(0));
}

TEST_CASE("near-singular propagator") {
  SubdiagramState st;
  st.value = BiSpinor{};
  st.momentum = FourMomentum(1, 0, 0, 0);
  CHECK(code_of([&] { propagate(st); }) == ErrorCode::NearSingularPropagator);
  st.momentum = FourMomentum(1 + 1e-14, 0, 0, 0);
  CHECK(code_of([&] { propagate(st); }) == ErrorCode::NearSingularPropagator);
  st.momentum = FourMomentum(1.1, 0, 0, 0);
  CHECK_NOTHROW(propagate(st));
  CHECK(is_numeric(ErrorCode::NearSingularPropagator));
}

TEST_CASE("n=1 matches the two-diagram closed form") {
  ComptonProcess p;
  p.output = SumOutput::Amplitude;
  Cdag g = generate_compton_dag(p);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto m = sample_phase_space(p, seed);
    // u-bar(p') [ eps'* (p+k+m) eps / (s - m^2) + eps (p-k'+m) eps'* / (u - m^2) ] u(p), times (-ie)^2 i
    const auto u = dirac_spinor(m[0], 1.0, true).components;
    const auto ub = dirac_adjoint(dirac_spinor(m[2], 1.0, true)).components;
    const DiracMatrix e = slash(linear_polarization(m[1], true).components);
    const DiracMatrix ep = slash(linear_polarization(m[3], true).components.conjugate().eval());
    DiracMatrix q1 = slash(FourMomentum(m[0] + m[1]));
    DiracMatrix q2 = slash(FourMomentum(m[0] - m[3]));
    q1.diagonal().array() += C(1);
    q2.diagonal().array() += C(1);
    const double s = minkowski_square(FourMomentum(m[0] + m[1])) - 1.0;
    const double uu = minkowski_square(FourMomentum(m[0] - m[3])) - 1.0;
    const C bracket = (ub * (ep * q1 * e / s + e * q2 * ep / uu) * u)(0, 0);
    const C expect = kVertexFactor * kVertexFactor * C(0, 1) * bracket;
    const C got = std::get<C>(run(p, g, m));
    CHECK(std::abs(got - expect) <= 1e-12 * std::abs(expect));
  }
}

TEST_CASE("n=1 spin and polarization sum equals Klein-Nishina") {
  const double e4 = std::pow(kElementaryCharge, 4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ComptonProcess base;
    auto m = sample_phase_space(base, seed);
    double total = 0.0;
    for (bool si : {true, false})
      for (bool so : {true, false})
        for (State a : {State::X, State::Y})
          for (State b : {State::X, State::Y}) {
            ComptonProcess p;
            p.spin_in_up = si;
            p.spin_out_up = so;
            p.polarizations = {a, b};
            total += std::get<double>(run(p, generate_compton_dag(p), m));
          }
    const double pk = dot(m[0], m[1]), pk2 = dot(m[0], m[3]);
    const double d = 1.0 / pk - 1.0 / pk2;
    const double kn = 2.0 * e4 * (pk2 / pk + pk / pk2 + 2.0 * d + d * d);
    CHECK(std::abs(total / 4.0 - kn) <= 1e-10 * kn);
  }
}

TEST_CASE("diagram counts") {
  for (std::size_t n = 1; n <= 5; ++n) {
    ComptonProcess p;
    p.n = n;
    Cdag g = generate_compton_dag(p);
    std::size_t joins = 0, factorial = 1;
    for (std::size_t i = 2; i <= n + 1; ++i) factorial *= i;
    g.for_each_node([&](NodeId id) { joins += g.task(id).kernel == "qed.S2"; });
    CHECK(joins == factorial);
    NodeId sum = g.parents(g.exit_nodes().at(0))[0];
    CHECK(g.parents(sum).size() == factorial);
  }
  ComptonProcess one;
  CHECK(generate_compton_dag(one).node_count() == 26);
}

TEST_CASE("graph value agrees with the oracle") {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (auto reuse : {models::ReuseMode::BaseStates, models::ReuseMode::Subdiagrams}) {
      ComptonProcess p;
      p.n = n;
      p.reuse = reuse;
      p.output = SumOutput::Amplitude;
      p.spin_out_up = false;
      p.polarizations = {State::Y, State::X};
      Cdag g = generate_compton_dag(p);
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto m = sample_phase_space(p, seed);
        const C oracle = oracle_amplitude(p, m);
        CHECK(relative_difference(run(p, g, m), Value(oracle)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("reduced graph computes the same amplitude") {
  for (std::size_t n = 1; n <= 3; ++n) {
    ComptonProcess p;
    p.n = n;
    Cdag g = generate_compton_dag(p);
    Cdag r = reduce_to_fixpoint(g).graph;
    const bool shrinks = n == 1 ? r.node_count() == g.node_count() : r.node_count() < g.node_count();
    CHECK(shrinks);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto m = sample_phase_space(p, seed);
      CHECK(relative_difference(run(p, g, m), run(p, r, m)) <= 1e-12);
    }
  }
}

TEST_CASE("gauge invariance") {
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      ComptonProcess phys;
      phys.n = n;
      phys.output = SumOutput::Amplitude;
      auto m = sample_phase_space(phys, seed);
      const double scale = std::abs(oracle_amplitude(phys, m));
      for (std::size_t ph = 0; ph <= n; ++ph) {
        ComptonProcess k = phys;
        k.polarizations.assign(n + 1, State::X);
        k.polarizations[ph] = State::K;
        const double val = std::abs(std::get<C>(run(k, generate_compton_dag(k), m)));
        CHECK(val <= 1e-8 * scale);
      }
    }
  }
}

TEST_CASE("phase space") {
  for (std::size_t n = 1; n <= 4; ++n) {
    ComptonProcess p;
    p.n = n;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto m = sample_phase_space(p, seed);
      REQUIRE(m.size() == n + 3);
      FourMomentum balance = FourMomentum::Zero();
      for (std::size_t i = 0; i <= n; ++i) balance += m[i];
      balance -= m[n + 1] + m[n + 2];
      CHECK(balance.cwiseAbs().maxCoeff() <= 1e-10);
      for (std::size_t i = 0; i < m.size(); ++i) {
        const double mass = (i == 0 || i == n + 1) ? 1.0 : 0.0;
        CHECK(std::abs(minkowski_square(m[i]) - mass * mass) <= 1e-10 * std::max(1.0, m[i](0) * m[i](0)));
        CHECK(m[i](0) > 0.0);
      }
      CHECK(m == sample_phase_space(p, seed));
    }
    CHECK(sample_phase_space(p, 1) != sample_phase_space(p, 2));
  }
  models::PhaseSpaceConfig none{0.0, 0.0, 0.0, 1e-6};
  ComptonProcess p;
  CHECK(code_of([&] { sample_phase_space(p, 0, none); }) == ErrorCode::BelowThreshold);
}

TEST_CASE("process and polarization parsing") {
  CHECK(parse_compton_process("e- gamma -> e- gamma") == 1);
  CHECK(parse_compton_process("e- 3gamma -> e- gamma") == 3);
  CHECK(code_of([] { parse_compton_process("e- 3gamma -> e- 2gamma"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_compton_process("e- 0gamma -> e- gamma"); }) == ErrorCode::InvalidProcess);
  auto pol = parse_polarizations("x,y", 3);
  CHECK(pol == std::vector<State>{State::X, State::Y, State::X});
  pol = parse_polarizations("k3=y,1=k", 3);
  CHECK(pol == std::vector<State>{State::K, State::X, State::Y});
  CHECK(code_of([] { parse_polarizations("k4=y", 3); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_polarizations("z", 3); }) == ErrorCode::Parse);
}

TEST_CASE("subdiagram reuse equals the reduced base-state graph") {
  for (std::size_t n = 1; n <= 4; ++n) {
    ComptonProcess p;
    p.n = n;
    Cdag g = reduce_to_fixpoint(generate_compton_dag(p)).graph;
    p.reuse = models::ReuseMode::Subdiagrams;
    Cdag m = generate_compton_dag(p);
    CHECK(m.node_count() == g.node_count());
    CHECK(canonical_hash(m) == canonical_hash(g));
  }
}
