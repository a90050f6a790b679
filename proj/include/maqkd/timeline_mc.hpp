#pragma once

// Monte Carlo over the round-by-round protocol timeline. Used as an
// independent check of the analytic loading, storage and repeater timing.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "maqkd/params.hpp"
#include "maqkd/rates.hpp"

namespace maqkd::mc {

enum class Scenario { MaLink, ThreeLegRepeater };

struct McConfig {
  std::int64_t n_trials = 1'000'000;
  std::uint64_t seed = 1;
  Scenario scenario = Scenario::MaLink;

  void validate() const;
};

struct Estimate {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean

  bool within(double expected, double n_se) const {
    return std::abs(mean - expected) <= n_se * se;
  }
};

struct McReport {
  std::int64_t n_trials = 0;
  Estimate mean_load_trials;
  Estimate mean_storage_rounds;
  Estimate empirical_dephasing;
  // Repeater only: both middle sites load concurrently / one after the other.
  Estimate mean_T_rep;
  Estimate mean_T_rep_sequential;
};

struct MaLinkInputs {
  double P_A = 1.0;
  double P_B = 1.0;
  double T = 0.0;       // clock period
  double t_fixed = 0.0; // tau_swap + tau_BSM
  double T_n = 1.0;
};

MaLinkInputs ma_link_inputs(const PhysicalParams& params, double L);

McReport simulate_ma_link(const MaLinkInputs& in, const McConfig& mc);
McReport simulate_ma_link(const PhysicalParams& params, double L, const McConfig& mc);

struct RepeaterInputs {
  double P_ent = 1.0;
  double T_0 = 0.0;
  double P_A = 1.0;
  double T = 0.0;
  double tau_r = 0.0;
};

RepeaterInputs repeater_inputs(const rates::RepeaterParams& rp);

McReport simulate_repeater(const RepeaterInputs& in, const McConfig& mc);
McReport simulate_repeater(const rates::RepeaterParams& rp, const McConfig& mc);

// Per-trial QBER is affine in the sampled storage multiplier m:
// e(m) = e_dephased + m (e_fresh - e_dephased). Each trial draws Bob's wait,
// then one error bit.
Estimate simulate_qber(double e_fresh, double e_dephased, const MaLinkInputs& in,
                       const McConfig& mc);

// Raw geometric trial counts (support 1, 2, ...) from the per-trial streams.
std::vector<std::int64_t> sample_waits(double p, std::int64_t n, std::uint64_t seed);

// Exact mean of max(K1, K2) for two independent geometric counts.
double expected_max_geometric(double p);

struct ValidationCheck {
  std::string name;
  double expected = 0.0;
  Estimate simulated;
  bool pass = false;
};

// Timeline Monte Carlo against the closed-form loading, storage, QBER and
// repeater-timing expressions at total distance L.
std::vector<ValidationCheck> validate_against_analytic(const PhysicalParams& params,
                                                       double L, const McConfig& mc,
                                                       double n_se = 3.0);

}  // namespace maqkd::mc
