#pragma once

// Derivative-free maximisation of the setting-dependent functionals.
//
// Free unit vectors are parametrised by spherical angles (theta, phi); Bob's
// orthonormal steering frame by an axis-angle rotation applied to the
// canonical basis. The angle vector is searched with a compass (coordinate
// pattern) search with geometric step shrinking, restarted from Haar-random
// settings. Restart r draws from stream (seed, r), so any prefix of the
// restarts reproduces exactly and restarts may run in any order.

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include <Eigen/Geometry>

#include "steerkit/inequalities.hpp"
#include "steerkit/parallel.hpp"
#include "steerkit/rng.hpp"
#include "steerkit/sampling.hpp"

namespace steerkit {

struct OptimizerConfig {
  int restarts = 32;
  int max_iters = 500;
  double init_step = 0.5;
  double shrink = 0.6;
  double tol = 1e-7;
  std::uint64_t seed = 0;
};

inline void validate_config(const OptimizerConfig& cfg) {
  std::ostringstream msg;
  if (cfg.restarts < 1) msg << "restarts must be positive; ";
  if (cfg.max_iters < 1) msg << "max_iters must be positive; ";
  if (!(cfg.init_step > 0.0)) msg << "init_step must be positive; ";
  if (!(cfg.shrink > 0.0 && cfg.shrink < 1.0)) msg << "shrink must lie in (0, 1); ";
  if (!(cfg.tol > 0.0)) msg << "tol must be positive; ";
  if (!msg.str().empty()) throw Error(ErrorKind::DomainError, msg.str());
}

struct OptimizationResult {
  Functional functional = Functional::Cjwr2;
  double best_value = 0.0;
  Setting best_setting;
  std::uint64_t evaluations = 0;
  bool converged = false;
  double final_step = 0.0;
  int best_restart = 0;
  std::optional<double> closed_form;
  /// best_value - closed_form. Never above 1e-9; its magnitude is the
  /// distance by which the search fell short of the closed form.
  std::optional<double> gap_to_oracle;
};

inline constexpr double kSoundnessTol = 1e-9;

namespace detail {

inline Vector3 direction_from_angles(double theta, double phi) {
  const double st = std::sin(theta);
  return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

inline void angles_from_direction(const Vector3& d, double& theta, double& phi) {
  theta = std::acos(std::clamp(d.z(), -1.0, 1.0));
  phi = std::atan2(d.y(), d.x());
}

inline Matrix3 rotation_from_axis_angle(const Vector3& r) {
  const double angle = r.norm();
  if (angle < 1e-300) return Matrix3::Identity();
  return Eigen::AngleAxisd(angle, r / angle).toRotationMatrix();
}

/// Number of free unit vectors, and whether a rotation block follows.
struct Layout {
  int free_vectors;
  bool has_frame;
  int dims() const { return 2 * free_vectors + (has_frame ? 3 : 0); }
};

inline Layout layout_of(Functional f) {
  switch (f) {
    case Functional::Cjwr2:
    case Functional::ChshSteer: return {2, true};
    case Functional::Cjwr3: return {3, true};
    case Functional::ChshBell: return {4, false};
    case Functional::I3322: return {6, false};
  }
  return {0, false};
}

inline int parties_size(Functional f) {
  return (f == Functional::Cjwr3 || f == Functional::I3322) ? 3 : 2;
}

inline Setting decode(Functional f, const Eigen::VectorXd& x) {
  const Layout layout = layout_of(f);
  std::array<Vector3, 6> dirs;
  for (int k = 0; k < layout.free_vectors; ++k)
    dirs[static_cast<std::size_t>(k)] = direction_from_angles(x(2 * k), x(2 * k + 1));
  const int n = parties_size(f);
  if (layout.has_frame) {
    SteeringSetting s;
    s.n = n;
    for (int i = 0; i < n; ++i) s.u[static_cast<std::size_t>(i)] = dirs[static_cast<std::size_t>(i)];
    s.v = orthonormal_frame(rotation_from_axis_angle(x.tail<3>()), n);
    return s;
  }
  BellSetting s;
  s.count = n;
  for (int i = 0; i < n; ++i) {
    s.x[static_cast<std::size_t>(i)] = dirs[static_cast<std::size_t>(i)];
    s.y[static_cast<std::size_t>(i)] = dirs[static_cast<std::size_t>(n + i)];
  }
  return s;
}

inline double objective(Functional f, const FanoForm& fano, const Setting& setting) {
  switch (f) {
    case Functional::Cjwr2:
    case Functional::Cjwr3: {
      const auto& s = std::get<SteeringSetting>(setting);
      return unchecked_cjwr(fano, s.alice(), s.bob());
    }
    case Functional::ChshSteer: {
      const auto& s = std::get<SteeringSetting>(setting);
      return unchecked_chsh_steering(fano, s.u[0], s.u[1], s.v[0], s.v[1]);
    }
    case Functional::ChshBell: {
      const auto& s = std::get<BellSetting>(setting);
      return unchecked_chsh_bell(fano, s.x[0], s.x[1], s.y[0], s.y[1]);
    }
    case Functional::I3322: {
      const auto& s = std::get<BellSetting>(setting);
      return unchecked_i3322(fano, s.alice(), s.bob());
    }
  }
  return 0.0;
}

/// Haar-random starting point for restart `restart`.
inline Eigen::VectorXd initial_point(Functional f, std::uint64_t seed, int restart) {
  const Layout layout = layout_of(f);
  Eigen::VectorXd x(layout.dims());
  RandomStream rng(seed, static_cast<std::uint64_t>(restart));
  for (int k = 0; k < layout.free_vectors; ++k) angles_from_direction(rng.unit_vector(), x(2 * k), x(2 * k + 1));
  if (layout.has_frame) {
    const Eigen::AngleAxisd aa(rng.rotation());
    x.tail<3>() = aa.angle() * aa.axis();
  }
  return x;
}

struct RestartOutcome {
  double value = 0.0;
  Eigen::VectorXd point;
  std::uint64_t evaluations = 0;
  bool converged = false;
  double step = 0.0;
};

/// Compass search: poll +-step along each coordinate, move on the first
/// improvement; after a sweep without improvement shrink the step.
inline RestartOutcome compass_search(Functional f, const FanoForm& fano, Eigen::VectorXd x,
                                     const OptimizerConfig& cfg) {
  RestartOutcome out;
  const auto eval = [&](const Eigen::VectorXd& p) {
    ++out.evaluations;
    return objective(f, fano, decode(f, p));
  };
  double fx = eval(x);
  double step = cfg.init_step;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    bool improved = false;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      for (const double sign : {1.0, -1.0}) {
        const double saved = x(j);
        x(j) = saved + sign * step;
        const double fy = eval(x);
        if (fy > fx) {
          fx = fy;
          improved = true;
          break;
        }
        x(j) = saved;
      }
    }
    if (!improved) {
      step *= cfg.shrink;
      if (step < cfg.tol) {
        out.converged = true;
        break;
      }
    }
  }
  out.value = fx;
  out.point = std::move(x);
  out.step = step;
  return out;
}

}  // namespace detail

/// Maximises `which` over measurement settings for the state `fano`.
/// Deterministic in (which, fano, cfg); `threads` only affects speed.
inline OptimizationResult maximize(Functional which, const FanoForm& fano, const OptimizerConfig& cfg,
                                   int threads = 1) {
  validate_config(cfg);
  std::vector<detail::RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));
  parallel_for(outcomes.size(), threads, [&](std::size_t r) {
    outcomes[r] = detail::compass_search(which, fano, detail::initial_point(which, cfg.seed, static_cast<int>(r)), cfg);
  });

  std::size_t best = 0;
  OptimizationResult result;
  result.functional = which;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    result.evaluations += outcomes[r].evaluations;
    if (outcomes[r].value > outcomes[best].value) best = r;
  }
  const auto& win = outcomes[best];
  result.best_value = win.value;
  result.best_setting = detail::decode(which, win.point);
  result.converged = win.converged;
  result.final_step = win.step;
  result.best_restart = static_cast<int>(best);
  result.closed_form = closed_form_max(which, fano);
  if (result.closed_form) result.gap_to_oracle = result.best_value - *result.closed_form;
  return result;
}

struct TightnessRecord {
  Functional functional = Functional::Cjwr2;
  double closed = 0.0;
  double found = 0.0;
  /// closed - found
  double gap = 0.0;
  bool within_reach = false;
};

inline constexpr std::array<Functional, 4> kCertifiedFunctionals{
    Functional::Cjwr2, Functional::Cjwr3, Functional::ChshSteer, Functional::ChshBell};

/// Compares the optimizer against the closed-form maximum of every functional
/// that has one. Throws TightnessViolation if the search ever beats a closed
/// form, which can only mean a bug on one of the two sides.
inline std::vector<TightnessRecord> certify_tightness(const FanoForm& fano, const OptimizerConfig& cfg,
                                                      double reach_tol = 1e-3, int threads = 1) {
  std::vector<TightnessRecord> records;
  for (Functional which : kCertifiedFunctionals) {
    const OptimizationResult res = maximize(which, fano, cfg, threads);
    TightnessRecord rec;
    rec.functional = which;
    rec.closed = *res.closed_form;
    rec.found = res.best_value;
    rec.gap = rec.closed - rec.found;
    rec.within_reach = rec.gap <= reach_tol;
    if (rec.found > rec.closed + kSoundnessTol) {
      std::ostringstream msg;
      msg.precision(17);
      msg << to_string(which) << ": optimizer found " << rec.found << " above closed form " << rec.closed;
      throw Error(ErrorKind::TightnessViolation, msg.str());
    }
    records.push_back(rec);
  }
  return records;
}

}  // namespace steerkit
