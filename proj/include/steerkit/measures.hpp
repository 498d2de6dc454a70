#pragma once

// Closed-form steering, nonlocality and entanglement quantifiers.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "steerkit/state.hpp"

namespace steerkit {

struct MeasureReport {
  double f2 = 0.0;
  double f3 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
  double n2 = 0.0;
  double m_horodecki = 0.0;
  double b_max = 0.0;
  double concurrence = 0.0;
  double purity = 0.0;
};

struct WernerReport {
  double w = 0.0;
  double e = 0.0;
  double s3 = 0.0;
  double s2 = 0.0;
  double n2 = 0.0;
  double n3 = 0.0;
  double purity = 0.0;
  double lambda1 = 0.0;
};

/// max over settings of the two-setting CJWR (and CHSH-like steering)
/// functional: sqrt(c^2 - c_min^2).
inline double f2_closed(const CanonicalCoefficients& c) {
  return std::sqrt(std::max(0.0, c.c_sq - c.c_min * c.c_min));
}

/// max over settings of the three-setting CJWR functional: c.
inline double f3_closed(const CanonicalCoefficients& c) { return std::sqrt(c.c_sq); }

/// Maximal violation rescaled to [0, 1]: max{0, (lambda - 1) / (sqrt(n) - 1)}.
inline double normalized_violation(double lambda, double n) {
  return std::max(0.0, (lambda - 1.0) / (std::sqrt(n) - 1.0));
}

inline double steering_s2(const CanonicalCoefficients& c) {
  return normalized_violation(f2_closed(c), 2.0);
}

inline double steering_s3(const CanonicalCoefficients& c) {
  return normalized_violation(f3_closed(c), 3.0);
}

/// CHSH nonlocality. Same expression as steering_s2, evaluated independently
/// so callers can compare the two.
inline double nonlocality_n2(const CanonicalCoefficients& c) {
  return normalized_violation(f2_closed(c), 2.0);
}

/// Horodecki M(T): sum of the two largest eigenvalues of T^T T.
inline double horodecki_m(const FanoForm& f) {
  Eigen::SelfAdjointEigenSolver<Matrix3> eig(f.T.transpose() * f.T, Eigen::EigenvaluesOnly);
  const Vector3 ev = eig.eigenvalues();  // ascending
  return std::max(0.0, ev(1)) + std::max(0.0, ev(2));
}

/// Maximal CHSH expectation 2 sqrt(M(T)); the state violates CHSH iff > 2.
inline double bell_chsh_max(const FanoForm& f) { return 2.0 * std::sqrt(horodecki_m(f)); }

inline constexpr double kSpectrumImagTol = 1e-8;

/// Wootters concurrence from the eigenvalues of rho (Y(x)Y) rho* (Y(x)Y).
/// The product is not Hermitian, so a general complex eigensolver is used.
inline double concurrence(const DensityMatrix& rho) {
  const Matrix4c& flip = pauli_product(2, 2);
  const Matrix4c r = rho.matrix() * flip * rho.matrix().conjugate() * flip;
  Eigen::ComplexEigenSolver<Matrix4c> eig(r, false);
  std::array<double, 4> lambda{};
  for (int k = 0; k < 4; ++k) {
    const Complex v = eig.eigenvalues()(k);
    if (std::abs(v.imag()) > kSpectrumImagTol || v.real() < -kSpectrumImagTol) {
      std::ostringstream msg;
      msg << "eigenvalue " << v.real() << (v.imag() < 0 ? " - " : " + ") << std::abs(v.imag())
          << "i of rho*rho_tilde is not a non-negative real (tol " << kSpectrumImagTol << ")";
      throw Error(ErrorKind::SpectrumNotReal, msg.str());
    }
    lambda[static_cast<std::size_t>(k)] = std::max(0.0, v.real());
  }
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  const double value = std::sqrt(lambda[0]) - std::sqrt(lambda[1]) - std::sqrt(lambda[2]) -
                       std::sqrt(lambda[3]);
  return std::clamp(value, 0.0, 1.0);
}

/// Concurrence of an X state: 2 max{0, |r23| - sqrt(d1 d4), |r14| - sqrt(d2 d3)}.
inline double x_concurrence(const XStateParams& x) {
  const auto& d = x.d;
  const double first = x.r23 - std::sqrt(std::max(0.0, d[0] * d[3]));
  const double second = x.r14 - std::sqrt(std::max(0.0, d[1] * d[2]));
  return std::min(1.0, 2.0 * std::max({0.0, first, second}));
}

/// Concurrence of the canonical X state with a = (0,0,a3), b = (0,0,b3),
/// T = diag(c): 1/2 max{0, chi_+, chi_-} with
/// chi_pm = |c1 +- c2| - sqrt((1 +- c3)^2 - (a3 +- b3)^2).
inline double canonical_x_concurrence(double a3, double b3, const Vector3& c) {
  const double plus_rad = (1.0 + c(2)) * (1.0 + c(2)) - (a3 + b3) * (a3 + b3);
  const double minus_rad = (1.0 - c(2)) * (1.0 - c(2)) - (a3 - b3) * (a3 - b3);
  if (plus_rad < -kPhysicalTol || minus_rad < -kPhysicalTol) {
    std::ostringstream msg;
    msg << "(1 +- c3)^2 - (a3 +- b3)^2 = (" << plus_rad << ", " << minus_rad << ") is negative";
    throw Error(ErrorKind::Unphysical, msg.str());
  }
  try {
    (void)canonical_state(Vector3(0.0, 0.0, a3), Vector3(0.0, 0.0, b3), c);
  } catch (const Error& e) {
    throw Error(ErrorKind::Unphysical, std::string("composed canonical X state: ") + e.what());
  }
  const double chi_plus = std::abs(c(0) + c(1)) - std::sqrt(std::max(0.0, plus_rad));
  const double chi_minus = std::abs(c(0) - c(1)) - std::sqrt(std::max(0.0, minus_rad));
  return std::min(1.0, 0.5 * std::max({0.0, chi_plus, chi_minus}));
}

/// Concurrence of a Bell-diagonal state from its largest eigenvalue.
inline double bell_diagonal_concurrence(double lambda1) {
  return std::max(0.0, 2.0 * lambda1 - 1.0);
}

/// Three-setting steering of a Bell-diagonal state from its purity.
inline double s3_from_purity(double purity) {
  if (!(purity >= 0.25 - kPhysicalTol && purity <= 1.0 + kPhysicalTol)) {
    std::ostringstream msg;
    msg << "purity " << purity << " outside [0.25, 1]";
    throw Error(ErrorKind::DomainError, msg.str());
  }
  const double s = (std::sqrt(std::max(0.0, 4.0 * purity - 1.0)) - 1.0) /
                   (std::numbers::sqrt3 - 1.0);
  return std::max(0.0, s);
}

/// Closed-form analytics of the Werner family w |Psi-><Psi-| + (1-w) 1/4.
inline WernerReport werner_report(double w) {
  require_werner_parameter(w);
  WernerReport r;
  r.w = w;
  r.lambda1 = (1.0 + 3.0 * w) / 4.0;
  r.purity = (1.0 + 3.0 * w * w) / 4.0;
  r.e = bell_diagonal_concurrence(r.lambda1);
  r.s3 = normalized_violation(w * std::numbers::sqrt3, 3.0);
  r.s2 = normalized_violation(w * std::numbers::sqrt2, 2.0);
  r.n2 = r.s2;
  r.n3 = std::max(0.0, 5.0 * w - 4.0);
  return r;
}

inline MeasureReport analyze(const DensityMatrix& rho) {
  const FanoForm f = fano_decompose(rho);
  const CanonicalCoefficients c = canonical_coefficients(f);
  MeasureReport r;
  r.f2 = f2_closed(c);
  r.f3 = f3_closed(c);
  r.s2 = steering_s2(c);
  r.s3 = steering_s3(c);
  r.n2 = nonlocality_n2(c);
  r.m_horodecki = horodecki_m(f);
  r.b_max = bell_chsh_max(f);
  r.concurrence = concurrence(rho);
  r.purity = purity(rho);
  return r;
}

}  // namespace steerkit
