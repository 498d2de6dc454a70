#pragma once

// Setting-dependent steering and Bell functionals evaluated on the Fano form.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>

#include "steerkit/measures.hpp"
#include "steerkit/state.hpp"

namespace steerkit {

inline constexpr double kSettingTol = 1e-12;

/// Alice directions u_i and Bob directions v_i, i < n, n in {2, 3}. Bob's
/// directions must be orthonormal.
struct SteeringSetting {
  int n = 2;
  std::array<Vector3, 3> u{Vector3::UnitX(), Vector3::UnitY(), Vector3::UnitZ()};
  std::array<Vector3, 3> v{Vector3::UnitX(), Vector3::UnitY(), Vector3::UnitZ()};

  std::span<const Vector3> alice() const { return {u.data(), static_cast<std::size_t>(n)}; }
  std::span<const Vector3> bob() const { return {v.data(), static_cast<std::size_t>(n)}; }
};

/// Free unit directions, `count` per party (2 for CHSH, 3 for I3322).
struct BellSetting {
  int count = 2;
  std::array<Vector3, 3> x{Vector3::UnitX(), Vector3::UnitY(), Vector3::UnitZ()};
  std::array<Vector3, 3> y{Vector3::UnitX(), Vector3::UnitY(), Vector3::UnitZ()};

  std::span<const Vector3> alice() const { return {x.data(), static_cast<std::size_t>(count)}; }
  std::span<const Vector3> bob() const { return {y.data(), static_cast<std::size_t>(count)}; }
};

using Setting = std::variant<SteeringSetting, BellSetting>;

enum class Functional { Cjwr2, Cjwr3, ChshSteer, ChshBell, I3322 };

inline constexpr std::array<Functional, 5> kAllFunctionals{
    Functional::Cjwr2, Functional::Cjwr3, Functional::ChshSteer, Functional::ChshBell,
    Functional::I3322};

constexpr std::string_view to_string(Functional f) {
  switch (f) {
    case Functional::Cjwr2: return "cjwr2";
    case Functional::Cjwr3: return "cjwr3";
    case Functional::ChshSteer: return "chsh_steer";
    case Functional::ChshBell: return "chsh_bell";
    case Functional::I3322: return "i3322";
  }
  return "unknown";
}

/// Accepts the functional names above; "bell3322" is the sampling alias of i3322.
inline Functional parse_functional(std::string_view name) {
  for (Functional f : kAllFunctionals)
    if (to_string(f) == name) return f;
  if (name == "bell3322") return Functional::I3322;
  throw Error(ErrorKind::InvalidInput, "unknown functional '" + std::string(name) + "'");
}

namespace detail {

inline void require_unit(const Vector3& d, const char* label, int index) {
  const double dev = std::abs(d.norm() - 1.0);
  if (!(dev <= kSettingTol)) {
    std::ostringstream msg;
    msg << label << "[" << index << "] has | |d| - 1 | = " << dev;
    throw Error(ErrorKind::SettingConstraintViolated, msg.str());
  }
}

inline void require_scenario(bool ok, Functional f, int size) {
  if (!ok) {
    std::ostringstream msg;
    msg << to_string(f) << " is not defined for a setting with " << size << " directions per party";
    throw Error(ErrorKind::InvalidFunctionalForScenario, msg.str());
  }
}

}  // namespace detail

inline void validate_setting(const SteeringSetting& s) {
  if (s.n != 2 && s.n != 3) {
    throw Error(ErrorKind::SettingConstraintViolated,
                "steering setting needs n = 2 or 3, got " + std::to_string(s.n));
  }
  for (int i = 0; i < s.n; ++i) {
    detail::require_unit(s.u[static_cast<std::size_t>(i)], "u", i);
    detail::require_unit(s.v[static_cast<std::size_t>(i)], "v", i);
  }
  for (int i = 0; i < s.n; ++i)
    for (int j = i + 1; j < s.n; ++j) {
      const double dot = s.v[static_cast<std::size_t>(i)].dot(s.v[static_cast<std::size_t>(j)]);
      if (!(std::abs(dot) <= kSettingTol)) {
        std::ostringstream msg;
        msg << "v[" << i << "].v[" << j << "] = " << dot << ", Bob's directions must be orthonormal";
        throw Error(ErrorKind::SettingConstraintViolated, msg.str());
      }
    }
}

inline void validate_setting(const BellSetting& s) {
  if (s.count != 2 && s.count != 3) {
    throw Error(ErrorKind::SettingConstraintViolated,
                "Bell setting needs 2 or 3 directions, got " + std::to_string(s.count));
  }
  for (int i = 0; i < s.count; ++i) {
    detail::require_unit(s.x[static_cast<std::size_t>(i)], "x", i);
    detail::require_unit(s.y[static_cast<std::size_t>(i)], "y", i);
  }
}

/// <u.sigma (x) v.sigma> = u^T T v
inline double correlator(const FanoForm& f, const Vector3& u, const Vector3& v) {
  return u.dot(f.T * v);
}

// The unchecked_* kernels skip setting validation; the optimizer calls them
// with settings that satisfy the constraints by construction.

inline double unchecked_cjwr(const FanoForm& f, std::span<const Vector3> u,
                             std::span<const Vector3> v) {
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += correlator(f, u[i], v[i]);
  return std::abs(sum) / std::sqrt(static_cast<double>(u.size()));
}

inline double unchecked_chsh_steering(const FanoForm& f, const Vector3& u1, const Vector3& u2,
                                      const Vector3& v1, const Vector3& v2) {
  const double c11 = correlator(f, u1, v1), c12 = correlator(f, u1, v2);
  const double c21 = correlator(f, u2, v1), c22 = correlator(f, u2, v2);
  const double f_plus = (c11 + c21) * (c11 + c21) + (c12 + c22) * (c12 + c22);
  const double f_minus = (c11 - c21) * (c11 - c21) + (c12 - c22) * (c12 - c22);
  return 0.5 * (std::sqrt(f_plus) + std::sqrt(f_minus));
}

inline double unchecked_chsh_bell(const FanoForm& f, const Vector3& x1, const Vector3& x2,
                                  const Vector3& y1, const Vector3& y2) {
  return correlator(f, x1, y1 + y2) + correlator(f, x2, y1 - y2);
}

/// Joint probability of outcome +1 for both projective measurements along u, v.
inline double joint_probability(const FanoForm& f, const Vector3& u, const Vector3& v) {
  return 0.25 * (1.0 + u.dot(f.a) + v.dot(f.b) + correlator(f, u, v));
}

inline double unchecked_i3322(const FanoForm& f, std::span<const Vector3> u,
                              std::span<const Vector3> v) {
  const auto p = [&](int i, int j) {
    return joint_probability(f, u[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
  };
  const double p_a1 = 0.5 * (1.0 + u[0].dot(f.a));
  const double p_b1 = 0.5 * (1.0 + v[0].dot(f.b));
  const double p_b2 = 0.5 * (1.0 + v[1].dot(f.b));
  return p(0, 0) + p(1, 0) + p(2, 0) + p(0, 1) + p(1, 1) - p(2, 1) + p(0, 2) - p(1, 2) - p_a1 -
         p_b2 - 2.0 * p_b1;
}

/// CJWR functional (1/sqrt(n)) |sum_i <A_i (x) B_i>|.
inline double f_cjwr(const FanoForm& f, const SteeringSetting& s) {
  validate_setting(s);
  return unchecked_cjwr(f, s.alice(), s.bob());
}

/// CHSH-like steering functional 1/2 (sqrt(f_+) + sqrt(f_-)), two settings only.
inline double f_chsh_steering(const FanoForm& f, const SteeringSetting& s) {
  detail::require_scenario(s.n == 2, Functional::ChshSteer, s.n);
  validate_setting(s);
  return unchecked_chsh_steering(f, s.u[0], s.u[1], s.v[0], s.v[1]);
}

/// <x1.sigma (x) (y1 + y2).sigma + x2.sigma (x) (y1 - y2).sigma>
inline double chsh_bell_value(const FanoForm& f, const BellSetting& s) {
  detail::require_scenario(s.count == 2, Functional::ChshBell, s.count);
  validate_setting(s);
  return unchecked_chsh_bell(f, s.x[0], s.x[1], s.y[0], s.y[1]);
}

/// Collins-Gisin I3322 in probability form; local bound 0.
inline double i3322_value(const FanoForm& f, const BellSetting& s) {
  detail::require_scenario(s.count == 3, Functional::I3322, s.count);
  validate_setting(s);
  return unchecked_i3322(f, s.alice(), s.bob());
}

inline double evaluate(Functional which, const FanoForm& f, const Setting& setting) {
  switch (which) {
    case Functional::Cjwr2:
    case Functional::Cjwr3:
    case Functional::ChshSteer: {
      const auto* s = std::get_if<SteeringSetting>(&setting);
      detail::require_scenario(s != nullptr, which, 0);
      if (which == Functional::ChshSteer) return f_chsh_steering(f, *s);
      detail::require_scenario(s->n == (which == Functional::Cjwr2 ? 2 : 3), which, s->n);
      return f_cjwr(f, *s);
    }
    case Functional::ChshBell:
    case Functional::I3322: {
      const auto* s = std::get_if<BellSetting>(&setting);
      detail::require_scenario(s != nullptr, which, 0);
      return which == Functional::ChshBell ? chsh_bell_value(f, *s) : i3322_value(f, *s);
    }
  }
  return 0.0;
}

/// Closed-form maximum over settings, where one is known for arbitrary states.
inline std::optional<double> closed_form_max(Functional which, const FanoForm& f) {
  switch (which) {
    case Functional::Cjwr2:
    case Functional::ChshSteer: return f2_closed(canonical_coefficients(f));
    case Functional::Cjwr3: return f3_closed(canonical_coefficients(f));
    case Functional::ChshBell: return bell_chsh_max(f);
    case Functional::I3322: return std::nullopt;
  }
  return std::nullopt;
}

/// Upper envelope 5w/4 - 1 of I3322 on the Werner family.
inline double werner_i3322_bound(double w) { return 1.25 * w - 1.0; }

}  // namespace steerkit
