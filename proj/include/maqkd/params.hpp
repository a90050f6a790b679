#pragma once

#include <cmath>
#include <numbers>
#include <optional>

namespace maqkd {

// Nominal device values. Times in seconds, lengths in km unless noted.

struct GateErrorParams {
  double p_e = 1e-3;   // electron +-pi/2 Y gate
  double p_n = 1e-3;   // nuclear -pi/2 Y gate
  double p_cz = 2e-4;  // electron-nuclear CZ

  void validate() const;
};

struct CoherenceParams {
  double T_n = 10.0;
  // Electron dephasing during tau_swap / tau_BSM is only applied when set.
  std::optional<double> T_e;

  void validate() const;
};

struct OpticalParams {
  double eta = 0.9;        // double-encoder balancing efficiency
  double eta_s = 0.72;     // single-photon source
  double eta_c = 0.68;     // frequency conversion
  double eta_d = 0.93;     // detector
  double dark_rate = 1.0;  // counts per second
  double gate_window = 1e-9;
  double L_att = 25.0;
  double cooperativity = 50.0;
  double switch_loss_db = 0.0;  // optical switch insertion loss on the user arm

  static constexpr double kMinCooperativity = 1.22;

  bool strong_coupling() const { return cooperativity >= kMinCooperativity; }
  void validate() const;
};

struct TimingParams {
  double tau_init = 11.5e-9;
  double tau_int = 10e-9;
  double tau_M = 1e-9;
  double tau_dis = 20e-9;
  double tau_swap = 1.1e-6;
  double tau_BSM = 1.5e-6;

  // Clock period of one loading round.
  double period() const { return tau_init + tau_int + tau_dis + tau_M; }
  // Read-out and re-initialization time after both memories are loaded.
  double readout() const { return tau_swap + tau_BSM + tau_init; }
  void validate() const;
};

struct HyperfineParams {
  // pi / 165 ns
  double A_net = std::numbers::pi / 165e-9;

  double cz_time() const { return std::numbers::pi / A_net; }
  void validate() const;
};

struct PhysicalParams {
  OpticalParams optics;
  TimingParams timing;
  GateErrorParams gates;
  CoherenceParams coherence;
  HyperfineParams hyperfine;
  double c = 2e8;   // speed of light in fiber, m/s
  double f = 1.16;  // error-correction inefficiency
  // Multiplies P_A and P_B. Unset means the heralded-initialization
  // success probability eta * eta_s * eta_d.
  std::optional<double> dead_time_penalty;

  double load_efficiency() const {
    return dead_time_penalty.value_or(optics.eta * optics.eta_s * optics.eta_d);
  }
  void validate() const;
};

}  // namespace maqkd
