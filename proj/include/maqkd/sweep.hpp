#pragma once

// Distance sweeps, distance solvers and their CSV / SVG renderings.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "maqkd/config.hpp"
#include "maqkd/rates.hpp"

namespace maqkd::cli {

inline constexpr double kClock1G = 1e9;
inline constexpr double kClock100M = 1e8;

struct SweepRow {
  double L_km = 0.0;
  std::optional<double> R_ma;
  std::optional<double> R_plob1G;
  std::optional<double> R_plob100M;
  std::optional<double> R_rep;
  double P_A = 0.0;
  double P_B = 0.0;
  double e_X = 0.0;
  double e_Z = 0.0;
};

struct SweepTable {
  std::vector<Curve> curves;
  std::vector<SweepRow> rows;
};

// Rate of one curve at total distance L (bits per second).
double curve_rate(Curve curve, const PhysicalParams& params, double L);
double ma_rate(const PhysicalParams& params, double L);
double repeater_rate(const PhysicalParams& params, double L);

std::vector<double> sweep_points(const SweepRange& range);

// Points are evaluated on a worker pool; rows come back ordered by distance.
SweepTable run_sweep(const SweepConfig& cfg);

inline const char* kCsvHeader =
    "L_km,R_ma_bps,R_plob1G_bps,R_plob100M_bps,R_rep_bps,P_A,P_B,e_X,e_Z";

// Six significant digits; scientific notation below 1e-3 in magnitude.
std::string format_number(double x);

void write_csv(const SweepTable& table, std::ostream& out);
void write_svg(const SweepTable& table, std::ostream& out);

// Writes the artifacts selected by cfg.format next to cfg.output and returns
// the paths written.
std::vector<std::string> write_outputs(const SweepTable& table, const SweepConfig& cfg);

enum class SolveMode { CrossoverMaPlob, CrossoverRepPlob, RepeaterMax };

std::optional<SolveMode> parse_solve_mode(std::string_view s);

struct SolveResult {
  SolveMode mode = SolveMode::CrossoverMaPlob;
  std::optional<double> distance_km;  // empty: unbounded within the model
  double rate_a = 0.0;
  double rate_b = 0.0;
  std::string report;
};

// Crossovers are searched on the sweep grid, then bisected to 0.1 km.
SolveResult solve(const SweepConfig& cfg, SolveMode mode, double plob_clock = kClock1G);

}  // namespace maqkd::cli
