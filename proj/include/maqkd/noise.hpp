#pragma once

// Gate and memory error channels for the electron-nuclear spin register.

#include <span>
#include <string>

#include "maqkd/qmat.hpp"

namespace maqkd::noise {

using qmat::DensityOperator;
using qmat::Matrix;

enum class Axis { X, Y, Z };

// (1-p) U rho U^dag + p/3 (X rho' X + Y rho' Y + Z rho' Z), rho' = U rho U^dag.
DensityOperator depolarizing_gate(const DensityOperator& rho,
                                  const std::string& target, const Matrix& U,
                                  double p);

// Correlated two-qubit error model around an ideal two-qubit gate (CZ by
// default): Pauli pairs XX, YY, ZZ each with probability p/3.
DensityOperator noisy_cz(const DensityOperator& rho,
                         std::span<const std::string> targets, double p_cz);
DensityOperator noisy_cz(const DensityOperator& rho,
                         std::span<const std::string> targets, double p_cz,
                         const Matrix& ideal);

// Phase-flip channel about `axis`: coherences transverse to the axis decay
// by `factor` (in [0, 1]).
DensityOperator dephase_by_factor(const DensityOperator& rho,
                                  const std::string& target, double factor,
                                  Axis axis = Axis::Z);

// Exponential dephasing over an interval t with coherence time T_coh.
DensityOperator dephase(const DensityOperator& rho, const std::string& target,
                        double t, double T_coh, Axis axis = Axis::Z);

double dephasing_factor(double t, double T_coh);

// Mean of exp(-n T_clock / T_coh) for n ~ Geometric(P_succ) on {1, 2, ...}.
double expected_wait_dephasing(double p_succ, double T_clock, double T_coh);

}  // namespace maqkd::noise
