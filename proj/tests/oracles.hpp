#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library code paths it is used to check: Pauli products are rebuilt from
// explicit entries, expectation values are full matrix traces, and the
// concurrence uses the singular values of sqrt(rho) sqrt(rho_tilde) instead
// of a non-Hermitian eigenproblem.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;
using M2 = Eigen::Matrix<C, 2, 2>;
using M4 = Eigen::Matrix<C, 4, 4>;
using V3 = Eigen::Vector3d;

inline M2 sigma(int k) {
  M2 m;
  switch (k) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, C(0, -1), C(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline M4 tensor(const M2& a, const M2& b) {
  M4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = a(i / 2, j / 2) * b(i % 2, j % 2);
  return out;
}

inline M2 dot_sigma(const V3& n) { return n(0) * sigma(1) + n(1) * sigma(2) + n(2) * sigma(3); }

inline double expect(const M4& rho, const M4& op) { return (rho * op).trace().real(); }

struct Fano {
  V3 a, b;
  Eigen::Matrix3d T;
};

inline Fano fano(const M4& rho) {
  Fano f;
  for (int i = 0; i < 3; ++i) {
    f.a(i) = expect(rho, tensor(sigma(i + 1), sigma(0)));
    f.b(i) = expect(rho, tensor(sigma(0), sigma(i + 1)));
    for (int j = 0; j < 3; ++j) f.T(i, j) = expect(rho, tensor(sigma(i + 1), sigma(j + 1)));
  }
  return f;
}

/// Hermitian PSD square root by eigendecomposition.
inline M4 psd_sqrt(const M4& m) {
  Eigen::SelfAdjointEigenSolver<M4> eig(0.5 * (m + m.adjoint()));
  const Eigen::Vector4d root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.cast<C>().asDiagonal() * eig.eigenvectors().adjoint();
}

/// sqrt(lambda_i) are the singular values of sqrt(rho) sqrt(rho_tilde).
inline double concurrence(const M4& rho) {
  const M4 yy = tensor(sigma(2), sigma(2));
  const M4 tilde = yy * rho.conjugate() * yy;
  Eigen::JacobiSVD<M4> svd(psd_sqrt(rho) * psd_sqrt(tilde));
  const Eigen::Vector4d s = svd.singularValues();  // descending
  return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

inline double purity_from_spectrum(const M4& rho) {
  Eigen::SelfAdjointEigenSolver<M4> eig(rho);
  return eig.eigenvalues().squaredNorm();
}

/// Projector onto the +1 eigenspace of n.sigma.
inline M2 projector(const V3& n) { return 0.5 * (sigma(0) + dot_sigma(n)); }

/// I3322 from full traces Tr(M_i (x) M_j rho).
inline double i3322_trace(const M4& rho, const std::array<V3, 3>& u, const std::array<V3, 3>& v) {
  const auto p = [&](int i, int j) { return expect(rho, tensor(projector(u[i]), projector(v[j]))); };
  const double pa1 = expect(rho, tensor(projector(u[0]), sigma(0)));
  const double pb1 = expect(rho, tensor(sigma(0), projector(v[0])));
  const double pb2 = expect(rho, tensor(sigma(0), projector(v[1])));
  return p(0, 0) + p(1, 0) + p(2, 0) + p(0, 1) + p(1, 1) - p(2, 1) + p(0, 2) - p(1, 2) - pa1 - pb2 - 2 * pb1;
}

inline double chsh_trace(const M4& rho, const V3& x1, const V3& x2, const V3& y1, const V3& y2) {
  const M4 b = tensor(dot_sigma(x1), dot_sigma(y1 + y2)) + tensor(dot_sigma(x2), dot_sigma(y1 - y2));
  return expect(rho, b);
}

inline double correlator_trace(const M4& rho, const V3& u, const V3& v) {
  return expect(rho, tensor(dot_sigma(u), dot_sigma(v)));
}

/// Haar-random SU(2) from a normalised Gaussian quaternion.
inline M2 random_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Vector4d q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  M2 u;
  u << C(q(0), q(3)), C(q(2), q(1)), C(-q(2), q(1)), C(q(0), -q(3));
  return u;
}

/// Random density matrix independent of the library sampler.
inline M4 random_state(std::mt19937_64& rng, int rank = 4) {
  std::normal_distribution<double> g;
  Eigen::Matrix<C, 4, Eigen::Dynamic> m(4, rank);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < rank; ++j) m(i, j) = C(g(rng), g(rng));
  M4 rho = m * m.adjoint();
  return rho / rho.trace();
}

inline V3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return V3(g(rng), g(rng), g(rng)).normalized();
}

}  // namespace oracle
