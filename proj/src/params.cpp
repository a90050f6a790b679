#include "maqkd/params.hpp"

#include <stdexcept>
#include <string>

namespace maqkd {
namespace {

void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument(std::string(name) + " must be positive");
  }
}

void require_nonnegative(double x, const char* name) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument(std::string(name) + " must be non-negative");
  }
}

}  // namespace

void GateErrorParams::validate() const {
  require_probability(p_e, "p_e");
  require_probability(p_n, "p_n");
  require_probability(p_cz, "p_CZ");
}

void CoherenceParams::validate() const {
  // T_n may be +inf (no decoherence).
  if (!(T_n > 0.0)) throw std::invalid_argument("T_n must be positive");
  if (T_e && !(*T_e > 0.0)) throw std::invalid_argument("T_e must be positive");
}

void OpticalParams::validate() const {
  require_probability(eta, "eta");
  require_probability(eta_s, "eta_s");
  require_probability(eta_c, "eta_c");
  require_probability(eta_d, "eta_d");
  require_nonnegative(dark_rate, "dark_count_rate");
  require_positive(gate_window, "gate_window");
  require_positive(L_att, "L_att");
  require_positive(cooperativity, "cooperativity");
  require_nonnegative(switch_loss_db, "switch_loss_db");
  if (dark_rate * gate_window > 1.0) {
    throw std::invalid_argument("dark_count_rate * gate_window exceeds 1");
  }
}

void TimingParams::validate() const {
  require_nonnegative(tau_init, "tau_init");
  require_nonnegative(tau_int, "tau_int");
  require_nonnegative(tau_M, "tau_M");
  require_nonnegative(tau_dis, "tau_dis");
  require_nonnegative(tau_swap, "tau_swap");
  require_nonnegative(tau_BSM, "tau_BSM");
  require_positive(period(), "clock period");
}

void HyperfineParams::validate() const { require_positive(A_net, "A_net"); }

void PhysicalParams::validate() const {
  optics.validate();
  timing.validate();
  gates.validate();
  coherence.validate();
  hyperfine.validate();
  require_positive(c, "c");
  if (!(f >= 1.0)) throw std::invalid_argument("f must be >= 1");
  if (dead_time_penalty) {
    if (!(*dead_time_penalty > 0.0 && *dead_time_penalty <= 1.0)) {
      throw std::invalid_argument("dead_time_penalty must lie in (0, 1]");
    }
  }
}

}  // namespace maqkd
