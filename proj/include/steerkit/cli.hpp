#pragma once

// Command-line front end. run_cli() never throws: it maps every outcome to an
// exit code (0 success, 1 property or campaign failure, 2 bad input).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "steerkit/harness.hpp"
#include "steerkit/io.hpp"
#include "steerkit/measures.hpp"
#include "steerkit/optimizer.hpp"
#include "steerkit/sampling.hpp"

namespace steerkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitBadInput = 2;

inline std::uint64_t default_seed() {
  const char* env = std::getenv("STEERKIT_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used, 0);
    if (used == std::string(env).size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::InvalidInput, std::string("STEERKIT_SEED is not an unsigned integer: ") + env);
}

/// The three mutually exclusive ways of naming a state on the command line.
struct StateSource {
  std::string input;
  std::optional<double> werner;
  std::string bell;

  void attach(CLI::App& cmd) {
    auto* in = cmd.add_option("--input", input, "state document (JSON)");
    auto* w = cmd.add_option("--werner", werner, "Werner state with parameter w");
    auto* b = cmd.add_option("--bell", bell, "Bell state: phi+, phi-, psi+, psi-");
    in->excludes(w)->excludes(b);
    w->excludes(b);
  }

  DensityMatrix load() const {
    if (!input.empty()) {
      std::ifstream file(input);
      if (!file) throw Error(ErrorKind::InvalidInput, "cannot open " + input);
      json doc;
      try {
        doc = json::parse(file);
      } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidInput, input + ": " + e.what());
      }
      return state_from_json(doc);
    }
    if (werner) return werner_state(*werner);
    if (!bell.empty()) return bell_state(parse_bell_state(bell));
    throw Error(ErrorKind::InvalidInput, "one of --input, --werner, --bell is required");
  }
};

inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
  file << text;
}

inline std::string pretty(const json& j) { return j.dump(2) + "\n"; }

inline std::string measure_csv(const MeasureReport& r) {
  std::ostringstream s;
  s << std::setprecision(12) << "f2,f3,s2,s3,n2,m_horodecki,b_max,concurrence,purity\n"
    << r.f2 << ',' << r.f3 << ',' << r.s2 << ',' << r.s3 << ',' << r.n2 << ',' << r.m_horodecki << ','
    << r.b_max << ',' << r.concurrence << ',' << r.purity << '\n';
  return s.str();
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Steering, nonlocality and entanglement measures for two-qubit states", "steerkit"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = default_thread_count();
  app.add_option("--threads", threads, "worker threads (1 reproduces the serial reference)")
      ->check(CLI::PositiveNumber);

  std::optional<std::uint64_t> seed_flag;
  std::string out_path;
  const auto add_seed = [&](CLI::App* cmd) { cmd->add_option("--seed", seed_flag, "random seed (default $STEERKIT_SEED or 0)"); };
  const auto add_out = [&](CLI::App* cmd) { cmd->add_option("--out", out_path, "output file (default stdout)"); };

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "closed-form measures of one state");
  StateSource analyze_src;
  analyze_src.attach(*analyze_cmd);
  std::string format = "json";
  analyze_cmd->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  add_out(analyze_cmd);

  // werner
  auto* werner_cmd = app.add_subcommand("werner", "closed-form scan of the Werner family");
  double w_from = 0.0, w_to = 1.0;
  std::uint64_t w_steps = 100;
  std::string werner_format = "csv";
  werner_cmd->add_option("--from", w_from, "first w");
  werner_cmd->add_option("--to", w_to, "last w");
  werner_cmd->add_option("--steps", w_steps, "grid intervals (rows = steps + 1)");
  werner_cmd->add_option("--format", werner_format, "csv or json")->check(CLI::IsMember({"json", "csv"}));
  add_out(werner_cmd);

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "emit random states as state documents");
  std::string kind = "ginibre_mixed";
  int rank = 4;
  std::uint64_t count = 1;
  sample_cmd->add_option("--kind", kind, "pure_haar, ginibre_mixed, bell_diagonal, x_state, werner_grid");
  sample_cmd->add_option("--rank", rank, "Ginibre rank 1..4");
  sample_cmd->add_option("--count", count, "number of states");
  add_seed(sample_cmd);
  add_out(sample_cmd);

  // verify-tightness
  auto* tight_cmd = app.add_subcommand("verify-tightness", "random settings and optimizer vs closed forms");
  std::uint64_t n_states = 10000, n_settings = 100, certify = 100;
  OptimizerConfig opt_cfg;
  double reach_tol = 1e-3;
  tight_cmd->add_option("--states", n_states, "random states");
  tight_cmd->add_option("--settings", n_settings, "random settings per state and functional");
  tight_cmd->add_option("--certify", certify, "states also run through the optimizer");
  tight_cmd->add_option("--restarts", opt_cfg.restarts, "optimizer restarts");
  tight_cmd->add_option("--reach-tol", reach_tol, "allowed closed - found gap");
  tight_cmd->add_option("--kind", kind, "state sampler");
  tight_cmd->add_option("--rank", rank, "Ginibre rank 1..4");
  add_seed(tight_cmd);
  add_out(tight_cmd);

  // verify-hierarchy
  auto* hier_cmd = app.add_subcommand("verify-hierarchy", "N2 <=> S2 => S3 => E on random states");
  std::uint64_t hier_states = 100000;
  hier_cmd->add_option("--states", hier_states, "random states");
  hier_cmd->add_option("--kind", kind, "state sampler");
  hier_cmd->add_option("--rank", rank, "Ginibre rank 1..4");
  add_seed(hier_cmd);
  add_out(hier_cmd);

  // verify-3322
  auto* i3322_cmd = app.add_subcommand("verify-3322", "optimized I3322 on Werner states vs 5w/4 - 1");
  std::size_t grid = 21;
  i3322_cmd->add_option("--grid", grid, "points on [0, 1]");
  i3322_cmd->add_option("--restarts", opt_cfg.restarts, "optimizer restarts");
  add_seed(i3322_cmd);
  add_out(i3322_cmd);

  // optimize
  auto* opt_cmd = app.add_subcommand("optimize", "maximize one functional over settings");
  std::string functional = "cjwr3";
  bool certify_all = false;
  StateSource opt_src;
  opt_src.attach(*opt_cmd);
  opt_cmd->add_option("--functional", functional, "cjwr2, cjwr3, chsh_steer, chsh_bell, i3322");
  opt_cmd->add_option("--restarts", opt_cfg.restarts, "random restarts");
  opt_cmd->add_option("--max-iters", opt_cfg.max_iters, "pattern-search sweeps per restart");
  opt_cmd->add_option("--reach-tol", reach_tol, "allowed closed - found gap with --certify");
  opt_cmd->add_flag("--certify", certify_all, "compare every functional with its closed form");
  add_seed(opt_cmd);
  add_out(opt_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  }

  try {
    const std::uint64_t seed = seed_flag ? *seed_flag : default_seed();
    if (analyze_cmd->parsed()) {
      const MeasureReport r = analyze(analyze_src.load());
      emit(format == "csv" ? measure_csv(r) : pretty(to_json(r)), out_path, out);
    } else if (werner_cmd->parsed()) {
      const auto table = werner_scan(w_from, w_to, w_steps);
      if (werner_format == "csv") {
        emit(werner_csv(table), out_path, out);
      } else {
        json rows = json::array();
        for (const auto& r : table) rows.push_back(to_json(r));
        emit(pretty(rows), out_path, out);
      }
    } else if (sample_cmd->parsed()) {
      const SamplerSpec spec{parse_sampler_kind(kind), rank, seed, count};
      validate_sampler(spec);
      json states = json::array();
      for (std::uint64_t i = 0; i < count; ++i) states.push_back(state_to_json(sample_state(spec, i)));
      emit(pretty(states), out_path, out);
    } else if (opt_cmd->parsed()) {
      const FanoForm f = fano_decompose(opt_src.load());
      opt_cfg.seed = seed;
      if (certify_all) {
        json records = json::array();
        for (const auto& rec : certify_tightness(f, opt_cfg, reach_tol, threads)) records.push_back(to_json(rec));
        emit(pretty(records), out_path, out);
      } else {
        emit(pretty(to_json(maximize(parse_functional(functional), f, opt_cfg, threads))), out_path, out);
      }
    } else {
      // campaigns: the report is written even when the campaign fails
      opt_cfg.seed = seed;
      CampaignReport report;
      try {
        if (tight_cmd->parsed()) {
          TightnessOptions topt;
          topt.kind = parse_sampler_kind(kind);
          topt.rank = rank;
          topt.certify_states = certify;
          topt.reach_tol = reach_tol;
          topt.threads = threads;
          report = tightness_campaign(n_states, n_settings, opt_cfg, topt);
        } else if (hier_cmd->parsed()) {
          report = hierarchy_campaign(hier_states, seed, {parse_sampler_kind(kind), rank, threads});
        } else {
          report = i3322_envelope_campaign(unit_grid(grid), opt_cfg, threads);
        }
      } catch (const CampaignFailure& failure) {
        emit(pretty(to_json(failure.report())), out_path, out);
        err << "campaign failed: " << failure.report().counterexample.dump() << "\n";
        return kExitFailure;
      }
      emit(pretty(to_json(report)), out_path, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.is_input_error() ? kExitBadInput : kExitFailure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace steerkit::cli
