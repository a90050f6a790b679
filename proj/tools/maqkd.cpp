// maqkd: distance sweeps, crossover solvers and Monte Carlo checks for the
// single-NV memory-assisted MDI-QKD model.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "maqkd/config.hpp"
#include "maqkd/protocol.hpp"
#include "maqkd/rates.hpp"
#include "maqkd/sweep.hpp"
#include "maqkd/timeline_mc.hpp"

namespace {

using namespace maqkd;

enum Exit { kOk = 0, kConfigError = 1, kSolverFailure = 2, kIoError = 3 };

struct Options {
  std::string config;
  std::string out;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::string mode;
  double clock = cli::kClock1G;
  double distance = 0.0;
  std::optional<std::int64_t> trials;
};

cli::SweepConfig load(const Options& o) {
  auto cfg = o.config.empty() ? cli::SweepConfig{} : cli::load_config(o.config);
  if (!o.out.empty()) cfg.output = o.out;
  if (!o.format.empty()) {
    const auto f = cli::parse_format(o.format);
    if (!f) throw cli::ConfigError(0, "--format must be csv, svg or both");
    cfg.format = *f;
  }
  if (o.seed || o.trials) {
    if (!cfg.mc) cfg.mc.emplace();
    if (o.seed) cfg.mc->seed = *o.seed;
    if (o.trials) cfg.mc->n_trials = *o.trials;
  }
  cfg.validate();
  return cfg;
}

int run_sweep(const Options& o) {
  const auto cfg = load(o);
  const auto table = cli::run_sweep(cfg);
  for (const auto& path : cli::write_outputs(table, cfg)) std::cout << path << '\n';
  return kOk;
}

int run_solve(const Options& o) {
  const auto mode = cli::parse_solve_mode(o.mode);
  if (!mode) {
    throw cli::ConfigError(
        0, "--mode must be crossover_ma_plob, crossover_rep_plob or repeater_max");
  }
  const auto cfg = load(o);
  std::cout << cli::solve(cfg, *mode, o.clock).report << '\n';
  return kOk;
}

int run_observables(const Options& o) {
  const auto cfg = load(o);
  const auto& p = cfg.params;
  const double L = o.distance;
  const auto obs = protocol::compute_observables(p, L);
  const auto ma = rates::ma_key_rate(obs, p.f, L);
  const auto rep = rates::repeater_timing(rates::repeater_params(p, L));
  const auto fmt = cli::format_number;
  std::cout << "L_km " << fmt(L) << '\n'
            << "T_s " << fmt(obs.T) << '\n'
            << "P_A " << fmt(obs.P_A) << '\n'
            << "P_B " << fmt(obs.P_B) << '\n'
            << "N_L " << fmt(obs.N_L) << '\n'
            << "N_r " << obs.N_r << '\n'
            << "storage_factor " << fmt(obs.storage_factor) << '\n'
            << "e_X " << fmt(obs.e_X) << '\n'
            << "e_Z " << fmt(obs.e_Z) << '\n'
            << "R_ma_bps " << fmt(ma.rate) << (ma.clamped ? " (clamped)" : "") << '\n'
            << "R_plob1G_bps " << fmt(cli::curve_rate(cli::Curve::Plob1G, p, L)) << '\n'
            << "R_plob100M_bps " << fmt(cli::curve_rate(cli::Curve::Plob100M, p, L)) << '\n'
            << "P_ent " << fmt(rep.P_ent) << '\n'
            << "T_rep_s " << fmt(rep.T_rep) << '\n'
            << "R_rep_bps " << fmt(1.0 / rep.T_rep) << '\n';
  return kOk;
}

int run_mc_validate(const Options& o) {
  const auto cfg = load(o);
  const auto mc = cfg.mc.value_or(mc::McConfig{});
  const auto checks = mc::validate_against_analytic(cfg.params, o.distance, mc);
  bool all = true;
  for (const auto& c : checks) {
    const double z = c.simulated.se > 0 ? (c.simulated.mean - c.expected) / c.simulated.se : 0.0;
    std::printf("%-4s %-26s expected %-12s mc %-12s se %-12s z %+.2f\n",
                c.pass ? "PASS" : "FAIL", c.name.c_str(),
                cli::format_number(c.expected).c_str(),
                cli::format_number(c.simulated.mean).c_str(),
                cli::format_number(c.simulated.se).c_str(), z);
    all = all && c.pass;
  }
  return all ? kOk : kSolverFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-NV memory-assisted MDI-QKD rate model"};
  app.require_subcommand(1);
  Options o;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "key = value configuration file");
    sub->add_option("--seed", o.seed, "Monte Carlo seed");
  };

  auto* sweep = app.add_subcommand("sweep", "Rates over a distance grid");
  common(sweep);
  sweep->add_option("--out", o.out, "Output path without extension");
  sweep->add_option("--format", o.format, "csv, svg or both");

  auto* solve = app.add_subcommand("solve", "Crossover and reach solvers");
  common(solve);
  solve->add_option("--mode", o.mode,
                    "crossover_ma_plob, crossover_rep_plob or repeater_max")
      ->required();
  solve->add_option("--clock", o.clock, "PLOB clock rate in Hz")
      ->check(CLI::PositiveNumber);

  auto* obs = app.add_subcommand("observables", "Protocol observables at one distance");
  common(obs);
  obs->add_option("--distance", o.distance, "Total distance in km")
      ->check(CLI::NonNegativeNumber);

  auto* mcv = app.add_subcommand("mc-validate", "Timeline Monte Carlo vs analytic");
  common(mcv);
  mcv->add_option("--distance", o.distance, "Total distance in km")
      ->check(CLI::NonNegativeNumber);
  mcv->add_option("--trials", o.trials, "Number of trials")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*sweep) return run_sweep(o);
    if (*solve) return run_solve(o);
    if (*obs) return run_observables(o);
    return run_mc_validate(o);
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const cli::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const rates::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  }
}
