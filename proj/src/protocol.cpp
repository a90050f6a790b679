#include "maqkd/protocol.hpp"

#include <cmath>
#include <numbers>

#include "maqkd/noise.hpp"

namespace maqkd::protocol {
namespace {

using qmat::Register;

const std::string kSpins[] = {kElectron, kNuclear};

double switch_transmissivity(const OpticalParams& optics) {
  return std::pow(10.0, -optics.switch_loss_db / 10.0);
}

LoadResult load_with(int bit, Basis basis, double L_side,
                     const PhysicalParams& params,
                     const photonics::SideBsmPovm& povm) {
  const auto& optics = params.optics;
  const Register electron_reg({{kElectron, 2}});
  const int ground[] = {0};
  auto electron = noise::depolarizing_gate(
      DensityOperator::basis(electron_reg, ground), kElectron, half_pi_y(),
      params.gates.p_e);

  auto memory = photonics::double_encode(electron, optics.eta);
  memory = photonics::photon_loss(memory, photonics::kMemoryPhoton,
                                  optics.eta_s * optics.eta_c);
  const auto user = photonics::user_photon_state(
      bit, basis, L_side, optics.L_att, switch_transmissivity(optics));

  const auto outcomes = photonics::side_bsm(qmat::tensor(user, memory), povm);

  LoadResult result;
  Matrix acc = Matrix::Zero(2, 2);
  for (const auto& o : outcomes) {
    if (o.herald == photonics::Herald::Fail || !o.conditioned_state) continue;
    result.probability += o.probability;
    acc += o.probability *
           photonics::apply_frame(*o.conditioned_state, o.pauli_frame).matrix();
  }
  if (result.probability > 0.0) {
    result.electron =
        DensityOperator::unchecked(electron_reg, acc / result.probability);
  }
  return result;
}

}  // namespace

Matrix half_pi_y() {
  constexpr double s = 0.70710678118654752440;
  Matrix m(2, 2);
  m << s, s, s, -s;
  return m;
}

Matrix hyperfine_unitary(double t, double A_net) {
  Matrix U = Matrix::Identity(4, 4);
  U(3, 3) = std::polar(1.0, A_net * t);
  return U;
}

DensityOperator hyperfine_phase(const DensityOperator& rho, double t, double A_net) {
  return qmat::apply_unitary(rho, hyperfine_unitary(t, A_net), kSpins);
}

LoadResult load_side(int bit, Basis basis, double L_side, const PhysicalParams& params) {
  const auto povm = photonics::side_bsm_povm(
      params.optics.eta_d, photonics::dark_click_probability(params.optics));
  return load_with(bit, basis, L_side, params, povm);
}

LoadedSide load_all(double L_side, const PhysicalParams& params) {
  const auto povm = photonics::side_bsm_povm(
      params.optics.eta_d, photonics::dark_click_probability(params.optics));
  LoadedSide side;
  for (int b = 0; b < 2; ++b) {
    for (int bit = 0; bit < 2; ++bit) {
      auto r = load_with(bit, b == 0 ? Basis::Z : Basis::X, L_side, params, povm);
      side.probability += r.probability / 4.0;
      side.electron[b * 2 + bit] = std::move(r.electron);
    }
  }
  return side;
}

DensityOperator transfer_to_nuclear(const DensityOperator& rho_e,
                                    const PhysicalParams& params) {
  if (rho_e.reg().size() != 1 || rho_e.reg()[0].name != kElectron) {
    throw std::invalid_argument("transfer_to_nuclear expects the electron qubit");
  }
  const Register nuclear_reg({{kNuclear, 2}});
  const int up[] = {0};
  auto rho = qmat::tensor(rho_e, DensityOperator::basis(nuclear_reg, up));

  rho = noise::depolarizing_gate(rho, kNuclear, half_pi_y(), params.gates.p_n);
  rho = noise::noisy_cz(rho, kSpins, params.gates.p_cz,
                        hyperfine_unitary(params.hyperfine.cz_time(),
                                          params.hyperfine.A_net));
  rho = noise::depolarizing_gate(rho, kElectron, half_pi_y(), params.gates.p_e);

  const auto projectors = qmat::gates::computational_projectors(2);
  const std::string e[] = {kElectron};
  const auto branches = qmat::projective_measure(rho, projectors, e);

  // Outcome s_+1 leaves alpha|n+> - beta|n->; X on the nuclear spin restores it.
  Matrix acc = Matrix::Zero(4, 4);
  for (int k = 0; k < 2; ++k) {
    if (!branches[k].state) continue;
    auto s = *branches[k].state;
    if (k == 1) s = qmat::apply_unitary(s, qmat::gates::pauli_x(), kNuclear);
    acc += branches[k].probability * s.matrix();
  }
  const std::string n[] = {kNuclear};
  return qmat::partial_trace(DensityOperator::unchecked(rho.reg(), acc), n);
}

DensityOperator final_bsm_state(const DensityOperator& rho_ne,
                                const PhysicalParams& params) {
  auto rho = noise::noisy_cz(rho_ne, kSpins, params.gates.p_cz,
                             hyperfine_unitary(params.hyperfine.cz_time(),
                                               params.hyperfine.A_net));
  rho = noise::depolarizing_gate(rho, kElectron, half_pi_y(), params.gates.p_e);
  return noise::depolarizing_gate(rho, kNuclear, half_pi_y(), params.gates.p_n);
}

FinalBsmDistribution final_bsm(const DensityOperator& rho_ne,
                               const PhysicalParams& params) {
  const auto rho = final_bsm_state(rho_ne, params);
  const auto projectors = qmat::gates::computational_projectors(4);
  const auto branches = qmat::projective_measure(rho, projectors, kSpins);
  FinalBsmDistribution d;
  for (int k = 0; k < 4; ++k) d.p[k / 2][k % 2] = branches[k].probability;
  return d;
}

double decoding_error(Basis basis, int alice_bit, int bob_bit,
                      const FinalBsmDistribution& d) {
  const bool equal = alice_bit == bob_bit;
  const double says_equal = basis == Basis::Z ? d.nuclear(0) : d.electron(0);
  return (equal ? 1.0 - says_equal : says_equal) / d.total();
}

Qber qber(const LoadedSide& alice, const LoadedSide& bob, double storage_factor,
          const PhysicalParams& params) {
  const auto& T_e = params.coherence.T_e;
  Qber q;
  for (int b = 0; b < 2; ++b) {
    const Basis basis = b == 0 ? Basis::Z : Basis::X;
    double err = 0.0;
    for (int a = 0; a < 2; ++a) {
      const auto& ea = alice.electron[b * 2 + a];
      if (!ea) throw DegenerateLoading("Alice's side-BSM never heralds");
      auto electron_a = *ea;
      if (T_e) {
        electron_a = noise::dephase(electron_a, kElectron, params.timing.tau_swap, *T_e);
      }
      auto nuclear = transfer_to_nuclear(electron_a, params);
      // Phase flips in the storage frame {|n+>, |n->}.
      nuclear = noise::dephase_by_factor(nuclear, kNuclear, storage_factor,
                                         noise::Axis::X);
      for (int c = 0; c < 2; ++c) {
        const auto& eb = bob.electron[b * 2 + c];
        if (!eb) throw DegenerateLoading("Bob's side-BSM never heralds");
        auto electron_b = *eb;
        if (T_e) {
          electron_b = noise::dephase(electron_b, kElectron, params.timing.tau_BSM, *T_e);
        }
        const auto d = final_bsm(qmat::tensor(electron_b, nuclear), params);
        err += decoding_error(basis, a, c, d) / 4.0;
      }
    }
    (b == 0 ? q.e_z : q.e_x) = err;
  }
  return q;
}

double storage_factor(double P_B, const PhysicalParams& params) {
  const auto& t = params.timing;
  const double T_n = params.coherence.T_n;
  return noise::expected_wait_dephasing(P_B, t.period(), T_n) *
         noise::dephasing_factor(t.tau_swap + t.tau_BSM, T_n);
}

long long readout_rounds(const TimingParams& timing) {
  const double ratio = timing.readout() / timing.period();
  return static_cast<long long>(std::ceil(ratio * (1.0 - 1e-12)));
}

ProtocolObservables compute_observables(const PhysicalParams& params, double L) {
  params.validate();
  if (!(L >= 0.0)) throw std::invalid_argument("distance must be >= 0");

  const auto side = load_all(L / 2.0, params);
  if (!(side.probability > 0.0)) {
    throw DegenerateLoading("side-BSM success probability is zero");
  }

  ProtocolObservables obs;
  obs.P_A = params.load_efficiency() * side.probability;
  obs.P_B = obs.P_A;
  obs.T = params.timing.period();
  obs.N_L = 1.0 / obs.P_A + 1.0 / obs.P_B;
  obs.N_r = readout_rounds(params.timing);
  obs.Y_11 = 1.0;
  obs.storage_factor = storage_factor(obs.P_B, params);
  const auto q = qber(side, side, obs.storage_factor, params);
  obs.e_X = q.e_x;
  obs.e_Z = q.e_z;
  return obs;
}

}  // namespace maqkd::protocol
