#pragma once

// Seeded random states and measurement settings. Every sample is a pure
// function of (spec, index).

#include <array>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>

#include "steerkit/inequalities.hpp"
#include "steerkit/rng.hpp"
#include "steerkit/state.hpp"

namespace steerkit {

enum class SamplerKind { PureHaar, GinibreMixed, BellDiagonal, XState, WernerGrid };

inline constexpr std::array<SamplerKind, 5> kAllSamplerKinds{
    SamplerKind::PureHaar, SamplerKind::GinibreMixed, SamplerKind::BellDiagonal,
    SamplerKind::XState, SamplerKind::WernerGrid};

constexpr std::string_view to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::PureHaar: return "pure_haar";
    case SamplerKind::GinibreMixed: return "ginibre_mixed";
    case SamplerKind::BellDiagonal: return "bell_diagonal";
    case SamplerKind::XState: return "x_state";
    case SamplerKind::WernerGrid: return "werner_grid";
  }
  return "unknown";
}

inline SamplerKind parse_sampler_kind(std::string_view name) {
  for (SamplerKind k : kAllSamplerKinds)
    if (to_string(k) == name) return k;
  throw Error(ErrorKind::InvalidInput, "unknown sampler kind '" + std::string(name) + "'");
}

struct SamplerSpec {
  SamplerKind kind = SamplerKind::GinibreMixed;
  int rank = 4;  // ginibre_mixed only
  std::uint64_t seed = 0;
  std::uint64_t count = 1;
};

inline void validate_sampler(const SamplerSpec& spec) {
  if (spec.rank < 1 || spec.rank > 4)
    throw Error(ErrorKind::DomainError, "sampler rank must be in 1..4, got " + std::to_string(spec.rank));
  if (spec.count < 1) throw Error(ErrorKind::DomainError, "sampler count must be >= 1");
}

inline constexpr int kMaxRejections = 1000;

namespace detail {

inline DensityMatrix sample_pure(RandomStream& rng) {
  Vector4c psi;
  for (int k = 0; k < 4; ++k) psi(k) = rng.complex_normal();
  return pure_state(psi);
}

inline DensityMatrix sample_ginibre(RandomStream& rng, int rank) {
  Eigen::Matrix<Complex, 4, Eigen::Dynamic> g(4, rank);
  for (int c = 0; c < rank; ++c)
    for (int r = 0; r < 4; ++r) g(r, c) = rng.complex_normal();
  Matrix4c m = g * g.adjoint();
  m /= m.trace();
  return validate_density(m);
}

inline DensityMatrix sample_bell_diagonal(RandomStream& rng) {
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    FanoForm f;
    f.T = Vector3(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)).asDiagonal();
    const Matrix4c m = fano_matrix(f);
    Eigen::SelfAdjointEigenSolver<Matrix4c> eig(m, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() >= 0.0) return validate_density(m);
  }
  throw Error(ErrorKind::ExhaustedRejection,
              "no PSD Bell-diagonal state after " + std::to_string(kMaxRejections) + " draws");
}

inline DensityMatrix sample_x_state(RandomStream& rng) {
  std::array<double, 4> d{};
  double total = 0.0;
  for (double& x : d) {
    x = -std::log(1.0 - rng.uniform());  // exponential weights: uniform on the simplex
    total += x;
  }
  for (double& x : d) x /= total;
  const double r14 = rng.uniform() * std::sqrt(d[0] * d[3]);
  const double r23 = rng.uniform() * std::sqrt(d[1] * d[2]);
  const double phi14 = rng.uniform(-std::numbers::pi, std::numbers::pi);
  const double phi23 = rng.uniform(-std::numbers::pi, std::numbers::pi);
  Matrix4c m = Matrix4c::Zero();
  for (int j = 0; j < 4; ++j) m(j, j) = d[static_cast<std::size_t>(j)];
  m(0, 3) = std::polar(r14, phi14);
  m(3, 0) = std::conj(m(0, 3));
  m(1, 2) = std::polar(r23, phi23);
  m(2, 1) = std::conj(m(1, 2));
  return validate_density(m);
}

}  // namespace detail

inline DensityMatrix sample_state(const SamplerSpec& spec, std::uint64_t index) {
  validate_sampler(spec);
  if (index >= spec.count) {
    std::ostringstream msg;
    msg << "sample index " << index << " >= count " << spec.count;
    throw Error(ErrorKind::DomainError, msg.str());
  }
  RandomStream rng(spec.seed, index);
  switch (spec.kind) {
    case SamplerKind::PureHaar: return detail::sample_pure(rng);
    case SamplerKind::GinibreMixed: return detail::sample_ginibre(rng, spec.rank);
    case SamplerKind::BellDiagonal: return detail::sample_bell_diagonal(rng);
    case SamplerKind::XState: return detail::sample_x_state(rng);
    case SamplerKind::WernerGrid: {
      const double w = spec.count == 1 ? 1.0
                                       : static_cast<double>(index) / static_cast<double>(spec.count - 1);
      return werner_state(w);
    }
  }
  throw Error(ErrorKind::InvalidInput, "unhandled sampler kind");
}

/// Gram-Schmidt on the first `n` columns of a rotation.
inline std::array<Vector3, 3> orthonormal_frame(const Matrix3& rotation, int n) {
  std::array<Vector3, 3> frame{Vector3::UnitX(), Vector3::UnitY(), Vector3::UnitZ()};
  for (int k = 0; k < n; ++k) {
    Vector3 col = rotation.col(k);
    for (int j = 0; j < k; ++j) col -= frame[static_cast<std::size_t>(j)].dot(col) * frame[static_cast<std::size_t>(j)];
    frame[static_cast<std::size_t>(k)] = col.normalized();
  }
  return frame;
}

/// Random setting for the scenario of `which`: free unit vectors uniform on
/// the sphere, Bob's steering frame from a Haar rotation.
inline Setting sample_setting(Functional which, std::uint64_t seed, std::uint64_t index) {
  RandomStream rng(seed, index);
  switch (which) {
    case Functional::Cjwr2:
    case Functional::Cjwr3:
    case Functional::ChshSteer: {
      SteeringSetting s;
      s.n = which == Functional::Cjwr3 ? 3 : 2;
      for (int i = 0; i < s.n; ++i) s.u[static_cast<std::size_t>(i)] = rng.unit_vector();
      s.v = orthonormal_frame(rng.rotation().toRotationMatrix(), s.n);
      return s;
    }
    case Functional::ChshBell:
    case Functional::I3322: {
      BellSetting s;
      s.count = which == Functional::I3322 ? 3 : 2;
      for (int i = 0; i < s.count; ++i) s.x[static_cast<std::size_t>(i)] = rng.unit_vector();
      for (int i = 0; i < s.count; ++i) s.y[static_cast<std::size_t>(i)] = rng.unit_vector();
      return s;
    }
  }
  throw Error(ErrorKind::InvalidInput, "unhandled scenario");
}

}  // namespace steerkit
