#pragma once

// Seeded Monte Carlo campaigns over the closed forms, the optimizer and the
// entanglement / steering / nonlocality hierarchy. Every campaign is a pure
// function of its arguments apart from wall_time_ms; per-trial results are
// stored by index and reduced in index order, so the thread count never
// changes a report.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "steerkit/io.hpp"
#include "steerkit/measures.hpp"
#include "steerkit/optimizer.hpp"
#include "steerkit/parallel.hpp"
#include "steerkit/sampling.hpp"

namespace steerkit {

struct CampaignReport {
  std::string campaign;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  /// Largest (found - closed) seen; positive values beyond 1e-9 are failures.
  double max_bound_gap = 0.0;
  double max_hierarchy_violation = 0.0;
  std::int64_t wall_time_ms = 0;
  SamplerSpec sampler;
  json details = json::object();
  /// First failing trial (lowest index), serialised.
  json counterexample = nullptr;

  bool passed() const { return failures == 0; }
};

inline json to_json(const CampaignReport& r, bool with_time = true) {
  json j = {{"campaign", r.campaign},
            {"seed", r.seed},
            {"trials", r.trials},
            {"failures", r.failures},
            {"max_bound_gap", r.max_bound_gap},
            {"max_hierarchy_violation", r.max_hierarchy_violation},
            {"sampler", to_json(r.sampler)},
            {"details", r.details},
            {"counterexample", r.counterexample}};
  if (with_time) j["wall_time_ms"] = r.wall_time_ms;
  return j;
}

/// Raised when a campaign records at least one failing trial.
class CampaignFailure : public Error {
 public:
  explicit CampaignFailure(CampaignReport report)
      : Error(ErrorKind::CampaignFailed, describe(report)), report_(std::move(report)) {}

  const CampaignReport& report() const noexcept { return report_; }

 private:
  static std::string describe(const CampaignReport& r) {
    std::ostringstream msg;
    msg << r.campaign << ": " << r.failures << " of " << r.trials
        << " trials failed; first counterexample: " << r.counterexample.dump();
    return msg.str();
  }

  CampaignReport report_;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline std::int64_t elapsed_ms(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

inline void finish(CampaignReport& report, Clock::time_point start) {
  report.wall_time_ms = elapsed_ms(start);
  if (!report.passed()) throw CampaignFailure(report);
}

/// Median of a copy; 0 for an empty input.
inline double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

inline double max_or_zero(const std::vector<double>& values) {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

// Domain tags keep the random streams of different campaign stages apart.
inline constexpr std::uint64_t kSettingStreamTag = 0x5E771265ULL;
inline constexpr std::uint64_t kOptimizerStreamTag = 0x0B71A12EULL;

inline std::uint64_t setting_seed(std::uint64_t seed, Functional f) {
  return split_seed(seed ^ kSettingStreamTag, static_cast<std::uint64_t>(f));
}

inline std::uint64_t optimizer_seed(std::uint64_t seed, std::uint64_t index) {
  return split_seed(seed ^ kOptimizerStreamTag, index);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Tightness: random settings never beat the closed forms, and the optimizer
// reaches them.

struct TightnessOptions {
  SamplerKind kind = SamplerKind::GinibreMixed;
  int rank = 4;
  std::uint64_t certify_states = 100;
  double reach_tol = 1e-3;
  int threads = 1;
};

inline CampaignReport tightness_campaign(std::uint64_t n_states, std::uint64_t settings_per_state,
                                         const OptimizerConfig& cfg, const TightnessOptions& opt = {}) {
  const auto start = detail::Clock::now();
  validate_config(cfg);
  CampaignReport report;
  report.campaign = "tightness";
  report.seed = cfg.seed;
  report.trials = n_states;
  report.sampler = SamplerSpec{opt.kind, opt.rank, cfg.seed, n_states};
  if (n_states > 0) validate_sampler(report.sampler);

  constexpr std::size_t kFns = kCertifiedFunctionals.size();
  struct StateOutcome {
    std::array<double, kFns> bound_gap{};
    std::array<std::optional<double>, kFns> reach_gap;
    bool failed = false;
    json counterexample;
  };
  const std::uint64_t certified = std::min(n_states, opt.certify_states);
  std::vector<StateOutcome> outcomes(n_states);

  parallel_for(outcomes.size(), opt.threads, [&](std::size_t i) {
    StateOutcome& out = outcomes[i];
    const DensityMatrix rho = sample_state(report.sampler, i);
    const FanoForm f = fano_decompose(rho);
    for (std::size_t k = 0; k < kFns; ++k) {
      const Functional which = kCertifiedFunctionals[k];
      const double closed = *closed_form_max(which, f);
      out.bound_gap[k] = -std::numeric_limits<double>::infinity();
      for (std::uint64_t s = 0; s < settings_per_state; ++s) {
        const Setting setting = sample_setting(which, detail::setting_seed(cfg.seed, which), i * settings_per_state + s);
        double value = evaluate(which, f, setting);
        if (which == Functional::ChshBell) value = std::abs(value);
        out.bound_gap[k] = std::max(out.bound_gap[k], value - closed);
        if (value > closed + kSoundnessTol && !out.failed) {
          out.failed = true;
          out.counterexample = {{"state_index", i}, {"state", state_to_json(rho)},
                                {"functional", std::string(to_string(which))}, {"setting", to_json(setting)},
                                {"value", value}, {"closed", closed}};
        }
      }
    }
    if (i >= certified) return;
    OptimizerConfig local = cfg;
    local.seed = detail::optimizer_seed(cfg.seed, i);
    try {
      const auto records = certify_tightness(f, local, opt.reach_tol);
      for (std::size_t k = 0; k < kFns; ++k) {
        out.reach_gap[k] = records[k].gap;
        out.bound_gap[k] = std::max(out.bound_gap[k], -records[k].gap);
        if (!records[k].within_reach && !out.failed) {
          out.failed = true;
          out.counterexample = {{"state_index", i}, {"state", state_to_json(rho)}, {"reach", to_json(records[k])}};
        }
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::TightnessViolation) throw;
      if (!out.failed) {
        out.failed = true;
        out.counterexample = {{"state_index", i}, {"state", state_to_json(rho)}, {"error", e.what()}};
      }
    }
  });

  json per_functional = json::object();
  std::vector<double> all_reach;
  std::uint64_t reach_failures = 0;
  for (std::size_t k = 0; k < kFns; ++k) {
    std::vector<double> reach;
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& out : outcomes) {
      worst = std::max(worst, out.bound_gap[k]);
      if (out.reach_gap[k]) {
        reach.push_back(*out.reach_gap[k]);
        if (*out.reach_gap[k] > opt.reach_tol) ++reach_failures;
      }
    }
    all_reach.insert(all_reach.end(), reach.begin(), reach.end());
    per_functional[std::string(to_string(kCertifiedFunctionals[k]))] = {
        {"max_bound_gap", outcomes.empty() ? 0.0 : worst},
        {"reach_median_gap", detail::median(reach)},
        {"reach_max_gap", detail::max_or_zero(reach)}};
    if (!outcomes.empty()) report.max_bound_gap = k == 0 ? worst : std::max(report.max_bound_gap, worst);
  }
  for (const auto& out : outcomes) {
    if (!out.failed) continue;
    if (report.failures++ == 0) report.counterexample = out.counterexample;
  }
  report.details = {{"settings_per_state", settings_per_state},
                    {"checks", n_states * settings_per_state * kFns},
                    {"certified_states", certified},
                    {"reach_tol", opt.reach_tol},
                    {"reach_median_gap", detail::median(all_reach)},
                    {"reach_max_gap", detail::max_or_zero(all_reach)},
                    {"reach_failures", reach_failures},
                    {"optimizer", to_json(cfg)},
                    {"functionals", per_functional}};
  detail::finish(report, start);
  return report;
}

// ---------------------------------------------------------------------------
// Hierarchy: N2 <=> S2 => S3 => E on sampled states.

inline constexpr double kS2N2Tol = 1e-15;
inline constexpr double kHierarchyTol = 1e-9;

struct HierarchyCheck {
  MeasureReport measures;
  bool ok = true;
  std::string violated;  // name of the first broken implication
  double violation = 0.0;
  bool steer3_not_steer2 = false;
  bool entangled_not_steer3 = false;
};

inline HierarchyCheck check_hierarchy(const DensityMatrix& rho) {
  HierarchyCheck h;
  h.measures = analyze(rho);
  const MeasureReport& m = h.measures;
  const double s2n2 = std::abs(m.s2 - m.n2);
  h.violation = std::max({0.0, s2n2, m.s3 - m.concurrence});
  const auto fail = [&](const char* what) {
    if (h.ok) h.violated = what;
    h.ok = false;
  };
  if (s2n2 > kS2N2Tol) fail("|S2 - N2| <= 1e-15");
  if (m.s2 > 0.0 && !(m.s3 > 0.0)) fail("S2 > 0 => S3 > 0");
  if (m.s3 > kHierarchyTol && !(m.concurrence > 0.0)) fail("S3 > 0 => E > 0");
  if (m.concurrence < m.s3 - kHierarchyTol) fail("E >= S3");
  h.steer3_not_steer2 = m.s3 > 0.0 && m.s2 == 0.0;
  h.entangled_not_steer3 = m.concurrence > 0.0 && m.s3 == 0.0;
  return h;
}

struct HierarchyOptions {
  SamplerKind kind = SamplerKind::GinibreMixed;
  int rank = 4;
  int threads = 1;
};

inline CampaignReport hierarchy_campaign(std::uint64_t n_states, std::uint64_t seed,
                                         const HierarchyOptions& opt = {}) {
  const auto start = detail::Clock::now();
  CampaignReport report;
  report.campaign = "hierarchy";
  report.seed = seed;
  report.trials = n_states;
  report.sampler = SamplerSpec{opt.kind, opt.rank, seed, n_states};
  if (n_states > 0) validate_sampler(report.sampler);

  struct Outcome {
    HierarchyCheck check;
    json counterexample;
  };
  std::vector<Outcome> outcomes(n_states);
  parallel_for(outcomes.size(), opt.threads, [&](std::size_t i) {
    const DensityMatrix rho = sample_state(report.sampler, i);
    try {
      outcomes[i].check = check_hierarchy(rho);
      if (!outcomes[i].check.ok)
        outcomes[i].counterexample = {{"state_index", i}, {"state", state_to_json(rho)},
                                      {"violated", outcomes[i].check.violated},
                                      {"measures", to_json(outcomes[i].check.measures)}};
    } catch (const Error& e) {
      outcomes[i].check.ok = false;
      outcomes[i].counterexample = {{"state_index", i}, {"state", state_to_json(rho)}, {"error", e.what()}};
    }
  });

  std::uint64_t gap32 = 0, gap_e3 = 0;
  json first_gap32 = nullptr, first_gap_e3 = nullptr;
  double max_s2n2 = 0.0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const HierarchyCheck& h = outcomes[i].check;
    if (!h.ok && report.failures++ == 0) report.counterexample = outcomes[i].counterexample;
    report.max_hierarchy_violation = std::max(report.max_hierarchy_violation, h.violation);
    max_s2n2 = std::max(max_s2n2, std::abs(h.measures.s2 - h.measures.n2));
    if (h.steer3_not_steer2 && gap32++ == 0) first_gap32 = i;
    if (h.entangled_not_steer3 && gap_e3++ == 0) first_gap_e3 = i;
  }
  report.details = {{"max_abs_s2_minus_n2", max_s2n2},
                    {"steer3_not_steer2", {{"count", gap32}, {"first_index", first_gap32}}},
                    {"entangled_not_steer3", {{"count", gap_e3}, {"first_index", first_gap_e3}}}};
  detail::finish(report, start);
  return report;
}

// ---------------------------------------------------------------------------
// Werner family.

inline std::vector<WernerReport> werner_scan(double w_min, double w_max, std::uint64_t steps) {
  if (!(0.0 <= w_min && w_min <= w_max && w_max <= 1.0)) {
    std::ostringstream msg;
    msg << "werner scan needs 0 <= from <= to <= 1, got [" << w_min << ", " << w_max << "]";
    throw Error(ErrorKind::DomainError, msg.str());
  }
  if (steps == 0) throw Error(ErrorKind::DomainError, "werner scan needs at least one step");
  std::vector<WernerReport> table;
  table.reserve(steps + 1);
  const double n = static_cast<double>(steps);
  for (std::uint64_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k);
    table.push_back(werner_report((w_min * (n - t) + w_max * t) / n));
  }
  return table;
}

inline std::string werner_csv(std::span<const WernerReport> table) {
  std::ostringstream out;
  out << "w,e,s3,s2,n2,n3,purity,lambda1\n" << std::setprecision(12);
  for (const WernerReport& r : table)
    out << r.w << ',' << r.e << ',' << r.s3 << ',' << r.s2 << ',' << r.n2 << ',' << r.n3 << ','
        << r.purity << ',' << r.lambda1 << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// I3322 on Werner states: optimized values stay under 5w/4 - 1, and reach the
// singlet maximum 1/4 at w = 1.

inline constexpr double kI3322SingletMax = 0.25;
inline constexpr double kI3322AttainTol = 1e-3;

inline CampaignReport i3322_envelope_campaign(std::span<const double> w_grid, const OptimizerConfig& cfg,
                                              int threads = 1) {
  const auto start = detail::Clock::now();
  validate_config(cfg);
  for (double w : w_grid) require_werner_parameter(w);
  CampaignReport report;
  report.campaign = "i3322_envelope";
  report.seed = cfg.seed;
  report.trials = w_grid.size();
  report.sampler = SamplerSpec{SamplerKind::WernerGrid, 4, cfg.seed, w_grid.size()};

  std::vector<OptimizationResult> results(w_grid.size());
  parallel_for(results.size(), threads, [&](std::size_t k) {
    OptimizerConfig local = cfg;
    local.seed = detail::optimizer_seed(cfg.seed, k);
    results[k] = maximize(Functional::I3322, werner_fano(w_grid[k]), local);
  });

  json rows = json::array();
  report.max_bound_gap = results.empty() ? 0.0 : -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < results.size(); ++k) {
    const double w = w_grid[k];
    const double bound = werner_i3322_bound(w);
    const double best = results[k].best_value;
    report.max_bound_gap = std::max(report.max_bound_gap, best - bound);
    const bool over = best > bound + kSoundnessTol;
    const bool short_at_one = w == 1.0 && best < kI3322SingletMax - kI3322AttainTol;
    rows.push_back({{"w", w}, {"best", best}, {"bound", bound}, {"gap", bound - best},
                    {"setting", to_json(results[k].best_setting)}});
    if ((over || short_at_one) && report.failures++ == 0)
      report.counterexample = {{"w", w}, {"best", best}, {"bound", bound},
                               {"reason", over ? "above 5w/4 - 1" : "below 1/4 - 1e-3 at w = 1"},
                               {"setting", to_json(results[k].best_setting)}};
  }
  report.details = {{"optimizer", to_json(cfg)}, {"rows", rows}};
  detail::finish(report, start);
  return report;
}

/// `points` evenly spaced values of w covering [0, 1]; a single point is w = 1.
inline std::vector<double> unit_grid(std::size_t points) {
  if (points == 0) throw Error(ErrorKind::DomainError, "grid needs at least one point");
  if (points == 1) return {1.0};
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k) grid[k] = static_cast<double>(k) / static_cast<double>(points - 1);
  return grid;
}

}  // namespace steerkit
