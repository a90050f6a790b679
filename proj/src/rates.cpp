#include "maqkd/rates.hpp"

#include <cmath>
#include <limits>

#include "maqkd/photonics.hpp"

namespace maqkd::rates {

double binary_entropy(double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("binary_entropy argument must lie in [0, 1]");
  }
  if (q == 0.0 || q == 1.0) return 0.0;
  return -q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q);
}

RatePoint ma_key_rate(const protocol::ProtocolObservables& obs, double f, double L) {
  if (!(f >= 1.0)) throw std::invalid_argument("f must be >= 1");
  RateComponents c;
  c.R_S = 1.0 / obs.T;
  c.N_L = obs.N_L;
  c.N_r = static_cast<double>(obs.N_r);
  c.Y_11 = obs.Y_11;
  c.e_X = obs.e_X;
  c.e_Z = obs.e_Z;

  const double secret = 1.0 - binary_entropy(c.e_X) - f * binary_entropy(c.e_Z);
  const double raw = c.R_S / (c.N_L + c.N_r) * c.Y_11 * secret;

  RatePoint p;
  p.L = L;
  p.clamped = raw < 0.0;
  p.rate = p.clamped ? 0.0 : raw;
  p.components = c;
  return p;
}

double plob_per_pulse(double L, double eta_d, double L_att) {
  const double eta_T = std::exp(-L / L_att) * eta_d;
  return -std::log2(1.0 - eta_T);
}

RatePoint plob_bound(double L, const OpticalParams& optics, double clock) {
  if (!(clock > 0.0)) throw std::invalid_argument("clock rate must be positive");
  RatePoint p;
  p.L = L;
  p.rate = clock * plob_per_pulse(L, optics.eta_d, optics.L_att);
  return p;
}

RepeaterParams repeater_params(const PhysicalParams& params, double L) {
  RepeaterParams rp;
  rp.L = L;
  rp.c = params.c;
  rp.optics = params.optics;
  rp.timing = params.timing;
  rp.p_load = params.load_efficiency() * protocol::load_all(L / 3.0, params).probability;
  return rp;
}

double entanglement_probability(double L, const OpticalParams& optics) {
  const double eff = optics.eta * optics.eta_s * optics.eta_c * optics.eta_d;
  return 0.5 * eff * eff * std::exp(-(L / 3.0) / optics.L_att);
}

RepeaterTiming repeater_timing(const RepeaterParams& rp) {
  RepeaterTiming t;
  t.P_ent = entanglement_probability(rp.L, rp.optics);
  if (!(t.P_ent > 0.0)) throw std::domain_error("entanglement probability is zero");
  if (!(rp.p_load > 0.0)) throw std::domain_error("loading probability is zero");
  t.T_0 = (rp.L / 3.0) * 1e3 / rp.c;
  t.T_ent = t.T_0 / t.P_ent;
  t.tau_r = rp.timing.readout();
  t.T_load = 1.5 * rp.timing.period() / rp.p_load;
  t.T_rep = t.T_ent + t.tau_r + t.T_load;
  return t;
}

RatePoint repeater_rate(const RepeaterParams& rp) {
  RatePoint p;
  p.L = rp.L;
  p.rate = 1.0 / repeater_timing(rp).T_rep;
  return p;
}

double crossover_distance(const std::function<double(double)>& curve_a,
                          const std::function<double(double)>& curve_b,
                          double lo, double hi, double tolerance) {
  if (!(lo < hi)) throw std::invalid_argument("crossover bracket is empty");
  const auto diff = [&](double L) {
    return std::log10(curve_a(L)) - std::log10(curve_b(L));
  };
  double f_lo = diff(lo);
  const double f_hi = diff(hi);
  if (std::isnan(f_lo) || std::isnan(f_hi) || (f_lo == 0.0 && f_hi == 0.0)) {
    throw SolverError("log-rate difference is undefined or identically zero");
  }
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo < 0) == (f_hi < 0)) {
    throw SolverError("no sign change of the log-rate difference in bracket");
  }
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = diff(mid);
    if (std::isnan(f_mid)) throw SolverError("rate undefined inside bracket");
    if ((f_mid < 0) == (f_lo < 0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::optional<double> repeater_max_distance(const RepeaterParams& rp) {
  const double p_dc = photonics::dark_click_probability(rp.optics);
  if (p_dc <= 0.0) return std::nullopt;
  const auto excess = [&](double L) {
    return std::log(entanglement_probability(L, rp.optics)) - std::log(p_dc);
  };
  if (excess(0.0) <= 0.0) return 0.0;
  double lo = 0.0, hi = 100.0;
  while (excess(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e9) throw SolverError("repeater reach did not bracket");
  }
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace maqkd::rates
