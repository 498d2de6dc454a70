#pragma once

// Two-qubit states: validation, Pauli (Fano) decomposition, local-unitary
// invariants and X-state reduction.
//
// Basis ordering is |00>, |01>, |10>, |11> and sigma_1..3 = X, Y, Z.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "steerkit/error.hpp"

namespace steerkit {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix<Complex, 2, 2>;
using Matrix4c = Eigen::Matrix<Complex, 4, 4>;
using Vector4c = Eigen::Matrix<Complex, 4, 1>;
using Vector3 = Eigen::Vector3d;
using Vector4 = Eigen::Vector4d;
using Matrix3 = Eigen::Matrix3d;

/// Single physicality epsilon used by every validation in the library.
inline constexpr double kPhysicalTol = 1e-9;

/// sigma_0 = identity, sigma_1..3 = X, Y, Z.
inline const Matrix2c& pauli(int index) {
  static const std::array<Matrix2c, 4> table = [] {
    std::array<Matrix2c, 4> p;
    const Complex i(0.0, 1.0);
    p[0] << 1.0, 0.0, 0.0, 1.0;
    p[1] << 0.0, 1.0, 1.0, 0.0;
    p[2] << 0.0, -i, i, 0.0;
    p[3] << 1.0, 0.0, 0.0, -1.0;
    return p;
  }();
  return table.at(static_cast<std::size_t>(index));
}

inline Matrix4c kron(const Matrix2c& lhs, const Matrix2c& rhs) {
  Matrix4c out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out.block<2, 2>(2 * r, 2 * c) = lhs(r, c) * rhs;
  return out;
}

/// sigma_i (x) sigma_j for i, j in 0..3.
inline const Matrix4c& pauli_product(int i, int j) {
  static const std::array<Matrix4c, 16> table = [] {
    std::array<Matrix4c, 16> t;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) t[static_cast<std::size_t>(4 * a + b)] = kron(pauli(a), pauli(b));
    return t;
  }();
  return table.at(static_cast<std::size_t>(4 * i + j));
}

class DensityMatrix;
DensityMatrix validate_density(const Matrix4c& raw);

/// Hermitian, unit-trace, positive semidefinite 4x4 matrix. Only
/// validate_density() constructs one, so holding a DensityMatrix is proof of
/// physicality.
class DensityMatrix {
 public:
  const Matrix4c& matrix() const noexcept { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

 private:
  explicit DensityMatrix(Matrix4c m) : m_(std::move(m)) {}
  friend DensityMatrix validate_density(const Matrix4c& raw);

  Matrix4c m_;
};

/// Checks the three physicality invariants at kPhysicalTol. Eigenvalues in
/// [-tol, 0) are clamped to zero and the trace renormalised.
inline DensityMatrix validate_density(const Matrix4c& raw) {
  const double herm_dev = (raw - raw.adjoint()).cwiseAbs().maxCoeff();
  if (!(herm_dev <= kPhysicalTol)) {
    std::ostringstream msg;
    msg << "max |M - M^dagger| = " << herm_dev << " exceeds " << kPhysicalTol;
    throw Error(ErrorKind::NotHermitian, msg.str());
  }
  const Complex tr = raw.trace();
  const double trace_dev = std::abs(tr - 1.0);
  if (!(trace_dev <= kPhysicalTol)) {
    std::ostringstream msg;
    msg << "|Tr(M) - 1| = " << trace_dev << " exceeds " << kPhysicalTol;
    throw Error(ErrorKind::TraceNotOne, msg.str());
  }
  Matrix4c herm = 0.5 * (raw + raw.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> eig(herm);
  const Vector4 evals = eig.eigenvalues();
  const double min_eval = evals.minCoeff();
  if (min_eval < -kPhysicalTol) {
    std::ostringstream msg;
    msg << "min eigenvalue " << min_eval << " < " << -kPhysicalTol;
    throw Error(ErrorKind::NotPositive, msg.str());
  }
  if (min_eval < 0.0) {
    Vector4 clamped = evals.cwiseMax(0.0);
    clamped /= clamped.sum();
    herm = eig.eigenvectors() * clamped.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
  } else {
    herm /= herm.trace().real();
  }
  return DensityMatrix(herm);
}

/// rho = 1/4 (1 + a.sigma (x) 1 + 1 (x) b.sigma + sum t_ij sigma_i (x) sigma_j)
struct FanoForm {
  Vector3 a = Vector3::Zero();
  Vector3 b = Vector3::Zero();
  Matrix3 T = Matrix3::Zero();
};

/// Singular values of T, sorted descending.
struct CanonicalCoefficients {
  Vector3 sigma = Vector3::Zero();
  double c_sq = 0.0;
  double c_min = 0.0;
};

struct XStateParams {
  std::array<double, 4> d{};
  double r14 = 0.0;
  double r23 = 0.0;
};

inline FanoForm fano_decompose(const DensityMatrix& rho) {
  // Tr(rho P) for Hermitian P is real up to rounding; the imaginary part is
  // dropped.
  const auto expect = [&](int i, int j) {
    return (rho.matrix() * pauli_product(i, j)).trace().real();
  };
  FanoForm f;
  for (int i = 0; i < 3; ++i) {
    f.a(i) = expect(i + 1, 0);
    f.b(i) = expect(0, i + 1);
    for (int j = 0; j < 3; ++j) f.T(i, j) = expect(i + 1, j + 1);
  }
  return f;
}

/// Unvalidated inverse of fano_decompose.
inline Matrix4c fano_matrix(const FanoForm& f) {
  Matrix4c m = pauli_product(0, 0);
  for (int i = 0; i < 3; ++i) {
    m += f.a(i) * pauli_product(i + 1, 0);
    m += f.b(i) * pauli_product(0, i + 1);
    for (int j = 0; j < 3; ++j) m += f.T(i, j) * pauli_product(i + 1, j + 1);
  }
  return 0.25 * m;
}

inline DensityMatrix fano_compose(const FanoForm& f) { return validate_density(fano_matrix(f)); }

inline CanonicalCoefficients canonical_coefficients(const FanoForm& f) {
  Eigen::JacobiSVD<Matrix3> svd(f.T);
  CanonicalCoefficients c;
  c.sigma = svd.singularValues();  // Eigen sorts these descending
  c.c_sq = c.sigma.squaredNorm();
  c.c_min = c.sigma(2);
  return c;
}

inline double purity(const DensityMatrix& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

/// Eigenvalues sorted descending.
inline Vector4 eigvals_hermitian(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> eig(rho.matrix(), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().reverse();
}

namespace detail {
inline bool is_x_position(int r, int c) { return r == c || r + c == 3; }
}  // namespace detail

inline XStateParams x_reduce(const DensityMatrix& rho, double tol = 1e-12) {
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      if (detail::is_x_position(r, c)) continue;
      const double mag = std::abs(rho(r, c));
      if (mag > tol) {
        std::ostringstream msg;
        msg << "|rho(" << r + 1 << "," << c + 1 << ")| = " << mag << " exceeds " << tol;
        throw Error(ErrorKind::NotXState, msg.str());
      }
    }
  XStateParams x;
  for (int j = 0; j < 4; ++j) x.d[static_cast<std::size_t>(j)] = rho(j, j).real();
  x.r14 = std::abs(rho(0, 3));
  x.r23 = std::abs(rho(1, 2));
  return x;
}

/// Local unitary e^{-i phi_+ Z} (x) e^{-i phi_- Z}, phi_pm = (phi_14 +- phi_23)/4,
/// which makes both anti-diagonal entries of an X state real and non-negative.
inline Matrix4c x_phase_unitary(const DensityMatrix& rho) {
  const double phi14 = std::arg(rho(0, 3));
  const double phi23 = std::arg(rho(1, 2));
  const double plus = 0.25 * (phi14 + phi23);
  const double minus = 0.25 * (phi14 - phi23);
  const auto z_rotation = [](double phi) {
    Matrix2c u = Matrix2c::Zero();
    u(0, 0) = std::polar(1.0, -phi);
    u(1, 1) = std::polar(1.0, phi);
    return u;
  };
  return kron(z_rotation(plus), z_rotation(minus));
}

/// Real X-state matrix with the given diagonal and anti-diagonal moduli.
inline DensityMatrix x_state_matrix(const XStateParams& x) {
  Matrix4c m = Matrix4c::Zero();
  for (int j = 0; j < 4; ++j) m(j, j) = x.d[static_cast<std::size_t>(j)];
  m(0, 3) = m(3, 0) = x.r14;
  m(1, 2) = m(2, 1) = x.r23;
  return validate_density(m);
}

inline DensityMatrix apply_local_unitary(const DensityMatrix& rho, const Matrix2c& ua,
                                         const Matrix2c& ub) {
  const Matrix4c u = kron(ua, ub);
  return validate_density(u * rho.matrix() * u.adjoint());
}

// Named states.

inline DensityMatrix pure_state(const Vector4c& psi) {
  const Vector4c unit = psi.normalized();
  return validate_density(unit * unit.adjoint());
}

enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

inline BellState parse_bell_state(std::string_view name) {
  if (name == "phi+") return BellState::PhiPlus;
  if (name == "phi-") return BellState::PhiMinus;
  if (name == "psi+") return BellState::PsiPlus;
  if (name == "psi-") return BellState::PsiMinus;
  throw Error(ErrorKind::InvalidInput, "unknown Bell state '" + std::string(name) +
                                           "' (expected phi+, phi-, psi+, psi-)");
}

inline DensityMatrix bell_state(BellState which) {
  Vector4c psi = Vector4c::Zero();
  switch (which) {
    case BellState::PhiPlus: psi << 1.0, 0.0, 0.0, 1.0; break;
    case BellState::PhiMinus: psi << 1.0, 0.0, 0.0, -1.0; break;
    case BellState::PsiPlus: psi << 0.0, 1.0, 1.0, 0.0; break;
    case BellState::PsiMinus: psi << 0.0, 1.0, -1.0, 0.0; break;
  }
  return pure_state(psi);
}

inline void require_werner_parameter(double w) {
  if (!(w >= 0.0 && w <= 1.0)) {
    std::ostringstream msg;
    msg << "Werner parameter w = " << w << " outside [0, 1]";
    throw Error(ErrorKind::DomainError, msg.str());
  }
}

inline FanoForm werner_fano(double w) {
  require_werner_parameter(w);
  FanoForm f;
  f.T = -w * Matrix3::Identity();
  return f;
}

/// w |Psi-><Psi-| + (1 - w) 1/4
inline DensityMatrix werner_state(double w) { return fano_compose(werner_fano(w)); }

inline DensityMatrix canonical_state(const Vector3& a, const Vector3& b, const Vector3& c) {
  FanoForm f;
  f.a = a;
  f.b = b;
  f.T = c.asDiagonal();
  return fano_compose(f);
}

inline DensityMatrix maximally_mixed() {
  return validate_density(0.25 * Matrix4c::Identity());
}

}  // namespace steerkit
