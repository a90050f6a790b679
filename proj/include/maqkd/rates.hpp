#pragma once

// Closed-form key-rate expressions and the distance solvers built on them.

#include <functional>
#include <optional>
#include <stdexcept>

#include "maqkd/params.hpp"
#include "maqkd/protocol.hpp"

namespace maqkd::rates {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double binary_entropy(double q);

struct RateComponents {
  double R_S = 0.0;
  double N_L = 0.0;
  double N_r = 0.0;
  double Y_11 = 0.0;
  double e_X = 0.0;
  double e_Z = 0.0;
};

struct RatePoint {
  double L = 0.0;
  double rate = 0.0;    // bits per second
  bool clamped = false; // the raw expression was negative
  std::optional<RateComponents> components;
};

// R = (1/T) / (N_L + N_r) * Y_11 * (1 - h(e_X) - f h(e_Z)), clamped at 0.
RatePoint ma_key_rate(const protocol::ProtocolObservables& obs, double f,
                      double L = 0.0);

// Repeaterless capacity -log2(1 - eta_T) per pulse, eta_T = e^{-L/L_att} eta_d.
double plob_per_pulse(double L, double eta_d, double L_att);
RatePoint plob_bound(double L, const OpticalParams& optics, double clock);

struct RepeaterParams {
  double L = 0.0;
  double c = 2e8;
  OpticalParams optics;
  TimingParams timing;
  // Side-BSM loading probability at each middle node (P_A = P_B).
  double p_load = 0.0;
};

struct RepeaterTiming {
  double T_0 = 0.0;    // middle-link transmission delay
  double P_ent = 0.0;
  double T_ent = 0.0;
  double tau_r = 0.0;
  double T_load = 0.0;
  double T_rep = 0.0;
};

// Middle-node parameters for a total length L; the loading probability uses
// the side-BSM model over the L/3 access legs.
RepeaterParams repeater_params(const PhysicalParams& params, double L);

// (1/2) (eta eta_s eta_c eta_d)^2 e^{-(L/3)/L_att}
double entanglement_probability(double L, const OpticalParams& optics);
RepeaterTiming repeater_timing(const RepeaterParams& rp);
RatePoint repeater_rate(const RepeaterParams& rp);

// Bisection on log10(a) - log10(b) down to `tolerance` km. The difference
// must change sign between the bracket ends.
double crossover_distance(const std::function<double(double)>& curve_a,
                          const std::function<double(double)>& curve_b,
                          double lo, double hi, double tolerance = 0.1);

// Total length at which the middle-link signal probability P_ent(L) falls to
// the per-gate dark click probability. Empty when there are no dark counts.
std::optional<double> repeater_max_distance(const RepeaterParams& rp);

}  // namespace maqkd::rates
