#pragma once

// Spin-photon double encoding and the linear-optics side Bell-state
// measurement between a user photon and a memory photon.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "maqkd/params.hpp"
#include "maqkd/qmat.hpp"

namespace maqkd::photonics {

using qmat::DensityOperator;
using qmat::Matrix;

// Photonic qutrit levels.
inline constexpr int kH = 0;
inline constexpr int kV = 1;
inline constexpr int kVac = 2;

inline const std::string kUserPhoton = "photon_user";
inline const std::string kMemoryPhoton = "photon_memory";
inline const std::string kElectron = "electron";

enum class Basis { Z, X };

qmat::Subsystem photon_mode(const std::string& name);

// Double-encoding module acting on an electron state (register holding one
// qubit). Output register is (photon, electron):
//   eta * V rho V^dag + (1 - eta) |vac><vac| (x) I/2,  V|s_k> = |pol_k>|s_k>.
DensityOperator double_encode(const DensityOperator& electron, double eta,
                              const std::string& photon = kMemoryPhoton);

// double_encode applied to (|s_0> + |s_+1>)/sqrt(2).
DensityOperator double_encoder_state(double eta);

// Pure-loss channel on a photonic qutrit: a photon survives with
// probability `transmissivity`, otherwise the mode is left in vacuum.
DensityOperator photon_loss(const DensityOperator& rho, const std::string& target,
                            double transmissivity);

// BB84 photon after a fiber of length L_side. Z basis: 0 -> H, 1 -> V;
// X basis: 0 -> D, 1 -> A. `extra_transmissivity` covers switch loss.
DensityOperator user_photon_state(int bit, Basis basis, double L_side,
                                  double L_att, double extra_transmissivity = 1.0,
                                  const std::string& name = kUserPhoton);

qmat::Vector bb84_polarization(int bit, Basis basis);

double dark_click_probability(const OpticalParams& optics);

enum class Herald { PsiPlus, PsiMinus, Fail };
enum class PauliFrame { None, X, ZX };

const char* to_string(Herald h);
const char* to_string(PauliFrame f);

// Detector order after the 50:50 beam splitter and polarizing splitters.
enum Detector { kCH = 0, kCV = 1, kDH = 2, kDV = 3 };
using ClickPattern = std::array<bool, 4>;

// Valid herald patterns: psi+ on {cH,cV} or {dH,dV}; psi- on {cH,dV} or
// {cV,dH}. Any other pattern is a failure.
Herald classify(const ClickPattern& clicks);

struct BsmOutcome {
  Herald herald = Herald::Fail;
  double probability = 0.0;
  // Remaining (spin) subsystems; empty for failures and zero-probability
  // heralds.
  std::optional<DensityOperator> conditioned_state;
  PauliFrame pauli_frame = PauliFrame::None;
};

// POVM elements on the (user, memory) two-qutrit input space, 9x9 with
// index user * 3 + memory.
struct SideBsmPovm {
  Matrix psi_plus;
  Matrix psi_minus;
};

SideBsmPovm side_bsm_povm(double eta_d, double p_dc);

// Joint register must contain kUserPhoton and kMemoryPhoton (qutrits) plus
// at least one more subsystem. Returns {psi+, psi-, fail}.
std::vector<BsmOutcome> side_bsm(const DensityOperator& joint,
                                 const OpticalParams& optics);
std::vector<BsmOutcome> side_bsm(const DensityOperator& joint,
                                 const SideBsmPovm& povm);

// Applies the recorded frame correction to `qubit` of the conditioned state.
DensityOperator apply_frame(const DensityOperator& rho, PauliFrame frame,
                            const std::string& qubit = kElectron);

}  // namespace maqkd::photonics
