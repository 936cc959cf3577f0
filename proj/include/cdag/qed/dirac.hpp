#pragma once

// Dirac-representation spinor algebra in natural units, metric (+,-,-,-).
// Lorentz vectors are stored with upper indices; slash() lowers them.

#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace cdag::qed {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using FourVector = Eigen::Matrix<Scalar, 4, 1>;

template <typename Scalar>
using DiracMatrixT = Eigen::Matrix<Complex<Scalar>, 4, 4>;

template <typename Scalar>
struct BasicBiSpinor {
  Eigen::Matrix<Complex<Scalar>, 4, 1> components = Eigen::Matrix<Complex<Scalar>, 4, 1>::Zero();
};

template <typename Scalar>
struct BasicAdjointBiSpinor {
  Eigen::Matrix<Complex<Scalar>, 1, 4> components = Eigen::Matrix<Complex<Scalar>, 1, 4>::Zero();
};

/// Complex four-vector (photon polarization), upper index.
template <typename Scalar>
struct BasicLorentzVector {
  Eigen::Matrix<Complex<Scalar>, 4, 1> components = Eigen::Matrix<Complex<Scalar>, 4, 1>::Zero();
};

using FourMomentum = FourVector<double>;
using DiracMatrix = DiracMatrixT<double>;
using BiSpinor = BasicBiSpinor<double>;
using AdjointBiSpinor = BasicAdjointBiSpinor<double>;
using LorentzVectorC = BasicLorentzVector<double>;

inline constexpr double kElectronMass = 1.0;
inline constexpr double kFineStructure = 1.0 / 137.035999084;
inline const double kElementaryCharge = std::sqrt(4.0 * M_PI * kFineStructure);

template <typename Scalar>
constexpr Scalar metric(int mu) {
  return mu == 0 ? Scalar(1) : Scalar(-1);
}

template <typename A, typename B>
auto minkowski_dot(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return a(0) * b(0) - a(1) * b(1) - a(2) * b(2) - a(3) * b(3);
}

template <typename A>
auto minkowski_square(const Eigen::MatrixBase<A>& a) {
  return minkowski_dot(a, a);
}

/// gamma^mu, mu in 0..3, Dirac representation.
template <typename Scalar>
const DiracMatrixT<Scalar>& gamma(int mu) {
  static const std::array<DiracMatrixT<Scalar>, 4> table = [] {
    using C = Complex<Scalar>;
    const C i(0, 1);
    std::array<DiracMatrixT<Scalar>, 4> g;
    for (auto& m : g) m.setZero();
    g[0].diagonal() << C(1), C(1), C(-1), C(-1);
    Eigen::Matrix<C, 2, 2> sigma[3];
    sigma[0] << C(0), C(1), C(1), C(0);
    sigma[1] << C(0), -i, i, C(0);
    sigma[2] << C(1), C(0), C(0), C(-1);
    for (int k = 0; k < 3; ++k) {
      g[k + 1].template block<2, 2>(0, 2) = sigma[k];
      g[k + 1].template block<2, 2>(2, 0) = -sigma[k];
    }
    return g;
  }();
  return table[mu];
}

/// Feynman slash gamma^mu a_mu of an upper-index vector, built component-wise.
template <typename Derived>
DiracMatrixT<typename Eigen::NumTraits<typename Derived::Scalar>::Real> slash(const Eigen::MatrixBase<Derived>& a) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  using C = Complex<Real>;
  const C a0(a(0)), a1(a(1)), a2(a(2)), a3(a(3));
  const C i(0, 1);
  const C plus = a1 + i * a2;
  const C minus = a1 - i * a2;
  DiracMatrixT<Real> m;
  m << a0, C(0), -a3, -minus,
       C(0), a0, -plus, a3,
       a3, minus, -a0, C(0),
       plus, -a3, C(0), -a0;
  return m;
}

/// i (Q-slash + m) / (Q^2 - m^2), the free fermion propagator without i*epsilon.
template <typename Scalar>
DiracMatrixT<Scalar> propagator_matrix(const FourVector<Scalar>& q, Scalar mass) {
  const Scalar denom = minkowski_square(q) - mass * mass;
  DiracMatrixT<Scalar> m = slash(q);
  m.diagonal().array() += Complex<Scalar>(mass);
  return m * Complex<Scalar>(0, Scalar(1) / denom);
}

/// Dirac spinor u(p, s) with u-bar u = 2m; spin_up selects chi = (1, 0).
template <typename Scalar>
BasicBiSpinor<Scalar> dirac_spinor(const FourVector<Scalar>& p, Scalar mass, bool spin_up) {
  using C = Complex<Scalar>;
  const Scalar norm = std::sqrt(p(0) + mass);
  const C chi0 = spin_up ? C(1) : C(0);
  const C chi1 = spin_up ? C(0) : C(1);
  // (sigma . p) chi / sqrt(E + m)
  const C pz(p(3)), pp(p(1), p(2)), pm(p(1), -p(2));
  BasicBiSpinor<Scalar> u;
  u.components << norm * chi0, norm * chi1, (pz * chi0 + pm * chi1) / norm, (pp * chi0 - pz * chi1) / norm;
  return u;
}

/// psi-bar = psi^dagger gamma^0
template <typename Scalar>
BasicAdjointBiSpinor<Scalar> dirac_adjoint(const BasicBiSpinor<Scalar>& psi) {
  BasicAdjointBiSpinor<Scalar> out;
  out.components = psi.components.adjoint() * gamma<Scalar>(0);
  return out;
}

/// Real linear polarizations transverse to the photon direction, from the
/// spherical angles of its spatial momentum. along_x selects the theta-hat vector.
template <typename Scalar>
BasicLorentzVector<Scalar> linear_polarization(const FourVector<Scalar>& k, bool along_x) {
  using C = Complex<Scalar>;
  const Scalar kt = std::hypot(k(1), k(2));
  const Scalar theta = std::atan2(kt, k(3));
  const Scalar phi = std::atan2(k(2), k(1));
  const Scalar ct = std::cos(theta), st = std::sin(theta), cp = std::cos(phi), sp = std::sin(phi);
  BasicLorentzVector<Scalar> eps;
  if (along_x) {
    eps.components << C(0), C(ct * cp), C(ct * sp), C(-st);
  } else {
    eps.components << C(0), C(-sp), C(cp), C(0);
  }
  return eps;
}

}  // namespace cdag::qed
