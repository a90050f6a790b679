#pragma once

// Single-NV memory-assisted MDI-QKD pipeline: load Alice into the electron,
// transfer to the nuclear spin, load Bob, then a deterministic spin BSM.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "maqkd/params.hpp"
#include "maqkd/photonics.hpp"
#include "maqkd/qmat.hpp"

namespace maqkd::protocol {

using photonics::Basis;
using qmat::DensityOperator;
using qmat::Matrix;

inline const std::string kElectron = photonics::kElectron;
inline const std::string kNuclear = "nuclear";

// Raised when no side-BSM herald is possible (e.g. eta_d = 0, no dark counts).
class DegenerateLoading : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The "-pi/2 Y" spin pulse of the protocol: |0> -> |+>, |1> -> |->.
Matrix half_pi_y();

// exp(-i H_eff t) on (electron, nuclear): phase e^{i A t} on |s_+1, down>.
Matrix hyperfine_unitary(double t, double A_net);
DensityOperator hyperfine_phase(const DensityOperator& rho, double t, double A_net);

struct LoadResult {
  double probability = 0.0;
  // Herald-averaged, frame-corrected electron state; empty when probability
  // is zero.
  std::optional<DensityOperator> electron;
};

LoadResult load_side(int bit, Basis basis, double L_side, const PhysicalParams& params);

// All four BB84 inputs at one side distance, indexed by basis * 2 + bit.
struct LoadedSide {
  double probability = 0.0;
  std::array<std::optional<DensityOperator>, 4> electron;
};

LoadedSide load_all(double L_side, const PhysicalParams& params);

// Electron qubit -> nuclear qubit carrying it in the {|n+>, |n->} basis.
DensityOperator transfer_to_nuclear(const DensityOperator& rho_e,
                                    const PhysicalParams& params);

// State of (electron, nuclear) just before the final Z measurements.
DensityOperator final_bsm_state(const DensityOperator& rho_ne,
                                const PhysicalParams& params);

struct FinalBsmDistribution {
  // [electron outcome][nuclear outcome]; 0 = s_0 / up.
  std::array<std::array<double, 2>, 2> p{};

  double electron(int k) const { return p[k][0] + p[k][1]; }
  double nuclear(int k) const { return p[0][k] + p[1][k]; }
  double total() const { return electron(0) + electron(1); }
};

FinalBsmDistribution final_bsm(const DensityOperator& rho_ne,
                               const PhysicalParams& params);

// Probability that the decoded key bit disagrees: Z basis reads the nuclear
// spin (up = equal bits), X basis reads the electron spin (s_0 = equal bits).
double decoding_error(Basis basis, int alice_bit, int bob_bit,
                      const FinalBsmDistribution& d);

struct Qber {
  double e_x = 0.0;
  double e_z = 0.0;
};

// QBER given loaded states and the nuclear storage coherence multiplier.
Qber qber(const LoadedSide& alice, const LoadedSide& bob, double storage_factor,
          const PhysicalParams& params);

// Off-diagonal multiplier of the stored nuclear qubit averaged over Bob's
// geometric loading wait plus the fixed swap and BSM exposure.
double storage_factor(double P_B, const PhysicalParams& params);

struct ProtocolObservables {
  double P_A = 0.0;
  double P_B = 0.0;
  double Y_11 = 1.0;
  double e_X = 0.0;
  double e_Z = 0.0;
  double T = 0.0;
  double N_L = 0.0;
  long long N_r = 0;
  double storage_factor = 1.0;
};

long long readout_rounds(const TimingParams& timing);

// L is the total Alice-Bob distance in km; each side covers L/2.
ProtocolObservables compute_observables(const PhysicalParams& params, double L);

}  // namespace maqkd::protocol
