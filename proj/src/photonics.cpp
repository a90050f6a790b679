#include "maqkd/photonics.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace maqkd::photonics {
namespace {

using qmat::Complex;
using qmat::Register;
using qmat::Vector;

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Four output modes (cH, cV, dH, dV), at most two photons in total.
using Occupation = std::array<int, 4>;

// Creation operator of an input mode expanded in output modes:
// a_p -> (c_p + d_p)/sqrt2, b_p -> (c_p - d_p)/sqrt2.
std::array<std::pair<int, double>, 2> expand_input(bool user, int pol) {
  const double s = user ? kInvSqrt2 : -kInvSqrt2;
  return {{{pol, kInvSqrt2}, {2 + pol, s}}};
}

// Output amplitudes for every input basis state (user, memory) in the
// two-qutrit space.
struct OutputMap {
  std::vector<Occupation> states;
  Matrix amplitudes;  // states.size() x 9
};

OutputMap build_output_map() {
  std::map<Occupation, int> index;
  std::vector<std::map<Occupation, Complex>> columns(9);

  for (int u = 0; u < 3; ++u) {
    for (int m = 0; m < 3; ++m) {
      std::vector<std::pair<Occupation, Complex>> terms;
      if (u == kVac && m == kVac) {
        terms.push_back({Occupation{0, 0, 0, 0}, 1.0});
      } else if (u == kVac || m == kVac) {
        const bool user = (m == kVac);
        for (auto [mode, amp] : expand_input(user, user ? u : m)) {
          Occupation o{0, 0, 0, 0};
          o[mode] = 1;
          terms.push_back({o, amp});
        }
      } else {
        for (auto [i, ai] : expand_input(true, u)) {
          for (auto [j, aj] : expand_input(false, m)) {
            Occupation o{0, 0, 0, 0};
            ++o[i];
            ++o[j];
            // (c^dag)^2 |0> = sqrt2 |2>
            const double norm = (i == j) ? std::numbers::sqrt2 : 1.0;
            terms.push_back({o, ai * aj * norm});
          }
        }
      }
      for (auto& [o, amp] : terms) {
        index.try_emplace(o, 0);
        columns[u * 3 + m][o] += amp;
      }
    }
  }

  OutputMap out;
  for (auto& [o, i] : index) {
    i = static_cast<int>(out.states.size());
    out.states.push_back(o);
  }
  out.amplitudes = Matrix::Zero(static_cast<Eigen::Index>(out.states.size()), 9);
  for (int col = 0; col < 9; ++col) {
    for (const auto& [o, amp] : columns[col]) out.amplitudes(index[o], col) += amp;
  }
  return out;
}

const OutputMap& output_map() {
  static const OutputMap map = build_output_map();
  return map;
}

double click_probability(int photons, double eta_d, double p_dc) {
  return 1.0 - (1.0 - p_dc) * std::pow(1.0 - eta_d, photons);
}

double pattern_probability(const Occupation& occ, const ClickPattern& pattern,
                           double eta_d, double p_dc) {
  double p = 1.0;
  for (int k = 0; k < 4; ++k) {
    const double q = click_probability(occ[k], eta_d, p_dc);
    p *= pattern[k] ? q : 1.0 - q;
  }
  return p;
}

constexpr std::array<ClickPattern, 2> kPsiPlusPatterns{{
    {true, true, false, false},
    {false, false, true, true},
}};
constexpr std::array<ClickPattern, 2> kPsiMinusPatterns{{
    {true, false, false, true},
    {false, true, true, false},
}};

Matrix herald_element(const std::array<ClickPattern, 2>& patterns, double eta_d,
                      double p_dc) {
  const OutputMap& map = output_map();
  const auto n = static_cast<Eigen::Index>(map.states.size());
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (const auto& pat : patterns) {
      weights(k) += pattern_probability(map.states[k], pat, eta_d, p_dc);
    }
  }
  return map.amplitudes.adjoint() * weights.cast<Complex>().asDiagonal() *
         map.amplitudes;
}

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
}

}  // namespace

qmat::Subsystem photon_mode(const std::string& name) { return {name, 3}; }

DensityOperator double_encode(const DensityOperator& electron, double eta,
                              const std::string& photon) {
  require_probability(eta, "eta");
  if (electron.reg().size() != 1 || electron.reg()[0].dim != 2) {
    throw std::invalid_argument("double_encode expects a single qubit");
  }
  const auto& e = electron.reg()[0];
  Register reg({photon_mode(photon), e});

  // Isometry |s_k> -> |pol_k>|s_k>, with index photon * 2 + spin.
  Matrix V = Matrix::Zero(6, 2);
  V(kH * 2 + 0, 0) = 1.0;
  V(kV * 2 + 1, 1) = 1.0;

  Matrix out = eta * (V * electron.matrix() * V.adjoint());
  out(kVac * 2 + 0, kVac * 2 + 0) += (1.0 - eta) / 2.0;
  out(kVac * 2 + 1, kVac * 2 + 1) += (1.0 - eta) / 2.0;
  return DensityOperator::unchecked(std::move(reg), std::move(out));
}

DensityOperator double_encoder_state(double eta) {
  Vector psi_in(2);
  psi_in << kInvSqrt2, kInvSqrt2;
  return double_encode(
      DensityOperator::pure(Register({{kElectron, 2}}), psi_in), eta);
}

DensityOperator photon_loss(const DensityOperator& rho, const std::string& target,
                            double transmissivity) {
  require_probability(transmissivity, "transmissivity");
  if (rho.reg()[rho.reg().index_of(target)].dim != 3) {
    throw std::invalid_argument("photon_loss target is not a photonic qutrit");
  }
  if (transmissivity == 1.0) return rho;
  const double t = transmissivity;
  Matrix K0 = Matrix::Zero(3, 3);
  K0(kH, kH) = std::sqrt(t);
  K0(kV, kV) = std::sqrt(t);
  K0(kVac, kVac) = 1.0;
  Matrix K1 = Matrix::Zero(3, 3);
  K1(kVac, kH) = 1.0;
  Matrix K2 = Matrix::Zero(3, 3);
  K2(kVac, kV) = 1.0;
  const std::pair<double, Matrix> terms[] = {
      {1.0, K0}, {1.0 - t, K1}, {1.0 - t, K2}};
  const std::string tg[] = {target};
  return qmat::apply_mixture(rho, terms, tg);
}

qmat::Vector bb84_polarization(int bit, Basis basis) {
  if (bit != 0 && bit != 1) throw std::invalid_argument("bit must be 0 or 1");
  Vector pol = Vector::Zero(3);
  if (basis == Basis::Z) {
    pol(bit == 0 ? kH : kV) = 1.0;
  } else {
    pol(kH) = kInvSqrt2;
    pol(kV) = bit == 0 ? kInvSqrt2 : -kInvSqrt2;
  }
  return pol;
}

DensityOperator user_photon_state(int bit, Basis basis, double L_side,
                                  double L_att, double extra_transmissivity,
                                  const std::string& name) {
  if (!(L_side >= 0.0)) throw std::invalid_argument("L_side must be >= 0");
  if (!(L_att > 0.0)) throw std::invalid_argument("L_att must be > 0");
  require_probability(extra_transmissivity, "extra_transmissivity");
  const double eta_ch = std::exp(-L_side / L_att) * extra_transmissivity;
  const Vector pol = bb84_polarization(bit, basis);
  Matrix m = eta_ch * (pol * pol.adjoint());
  m(kVac, kVac) += 1.0 - eta_ch;
  return DensityOperator::unchecked(Register({photon_mode(name)}), std::move(m));
}

double dark_click_probability(const OpticalParams& optics) {
  return optics.dark_rate * optics.gate_window;
}

const char* to_string(Herald h) {
  switch (h) {
    case Herald::PsiPlus: return "psi_plus";
    case Herald::PsiMinus: return "psi_minus";
    case Herald::Fail: break;
  }
  return "fail";
}

const char* to_string(PauliFrame f) {
  switch (f) {
    case PauliFrame::X: return "X";
    case PauliFrame::ZX: return "ZX";
    case PauliFrame::None: break;
  }
  return "I";
}

Herald classify(const ClickPattern& clicks) {
  for (const auto& p : kPsiPlusPatterns) {
    if (clicks == p) return Herald::PsiPlus;
  }
  for (const auto& p : kPsiMinusPatterns) {
    if (clicks == p) return Herald::PsiMinus;
  }
  return Herald::Fail;
}

SideBsmPovm side_bsm_povm(double eta_d, double p_dc) {
  require_probability(eta_d, "eta_d");
  require_probability(p_dc, "dark click probability");
  return {herald_element(kPsiPlusPatterns, eta_d, p_dc),
          herald_element(kPsiMinusPatterns, eta_d, p_dc)};
}

std::vector<BsmOutcome> side_bsm(const DensityOperator& joint,
                                 const OpticalParams& optics) {
  return side_bsm(joint, side_bsm_povm(optics.eta_d, dark_click_probability(optics)));
}

std::vector<BsmOutcome> side_bsm(const DensityOperator& joint,
                                 const SideBsmPovm& povm) {
  const auto& reg = joint.reg();
  if (!reg.contains(kUserPhoton) || !reg.contains(kMemoryPhoton) ||
      reg[reg.index_of(kUserPhoton)].dim != 3 ||
      reg[reg.index_of(kMemoryPhoton)].dim != 3 || reg.size() < 3) {
    throw std::invalid_argument(
        "side_bsm needs user and memory photon qutrits plus a spin register");
  }
  std::vector<std::string> rest;
  for (const auto& s : reg.subsystems()) {
    if (s.name != kUserPhoton && s.name != kMemoryPhoton) rest.push_back(s.name);
  }
  const std::string photons[] = {kUserPhoton, kMemoryPhoton};

  std::vector<BsmOutcome> out;
  double success = 0.0;
  const std::pair<Herald, const Matrix*> heralds[] = {
      {Herald::PsiPlus, &povm.psi_plus}, {Herald::PsiMinus, &povm.psi_minus}};
  for (auto [h, E] : heralds) {
    const Matrix full = qmat::embed(reg, *E, photons);
    const Matrix weighted = full * joint.matrix();
    BsmOutcome o;
    o.herald = h;
    o.pauli_frame = (h == Herald::PsiPlus) ? PauliFrame::X : PauliFrame::ZX;
    o.probability = std::max(weighted.trace().real(), 0.0);
    if (o.probability > 1e-300) {
      const auto reduced = qmat::partial_trace(
          DensityOperator::unchecked(reg, weighted), rest);
      Matrix m = reduced.matrix() / o.probability;
      m = (m + m.adjoint().eval()) / 2.0;
      o.conditioned_state = DensityOperator::unchecked(reduced.reg(), std::move(m));
    }
    success += o.probability;
    out.push_back(std::move(o));
  }
  BsmOutcome fail;
  fail.herald = Herald::Fail;
  fail.probability = std::max(1.0 - success, 0.0);
  out.push_back(std::move(fail));
  return out;
}

DensityOperator apply_frame(const DensityOperator& rho, PauliFrame frame,
                            const std::string& qubit) {
  switch (frame) {
    case PauliFrame::None: return rho;
    case PauliFrame::X: return qmat::apply_unitary(rho, qmat::gates::pauli_x(), qubit);
    case PauliFrame::ZX:
      return qmat::apply_unitary(
          rho, qmat::gates::pauli_z() * qmat::gates::pauli_x(), qubit);
  }
  return rho;
}

}  // namespace maqkd::photonics
