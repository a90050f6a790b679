#include "maqkd/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include <unsupported/Eigen/KroneckerProduct>

namespace maqkd::noise {
namespace {

using qmat::gates::pauli_x;
using qmat::gates::pauli_y;
using qmat::gates::pauli_z;

void require_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("error probability must lie in [0, 1]");
  }
}

void require_qubit(const DensityOperator& rho, const std::string& target) {
  if (rho.reg()[rho.reg().index_of(target)].dim != 2) {
    throw std::invalid_argument("target '" + target + "' is not a qubit");
  }
}

Matrix axis_pauli(Axis axis) {
  switch (axis) {
    case Axis::X: return pauli_x();
    case Axis::Y: return pauli_y();
    case Axis::Z: break;
  }
  return pauli_z();
}

}  // namespace

DensityOperator depolarizing_gate(const DensityOperator& rho,
                                  const std::string& target, const Matrix& U,
                                  double p) {
  require_qubit(rho, target);
  require_probability(p);
  const DensityOperator ideal = qmat::apply_unitary(rho, U, target);
  if (p == 0.0) return ideal;
  const std::pair<double, Matrix> terms[] = {
      {1.0 - p, qmat::gates::identity(2)},
      {p / 3.0, pauli_x()},
      {p / 3.0, pauli_y()},
      {p / 3.0, pauli_z()},
  };
  const std::string t[] = {target};
  return qmat::apply_mixture(ideal, terms, t);
}

DensityOperator noisy_cz(const DensityOperator& rho,
                         std::span<const std::string> targets, double p_cz) {
  return noisy_cz(rho, targets, p_cz, qmat::gates::cz());
}

DensityOperator noisy_cz(const DensityOperator& rho,
                         std::span<const std::string> targets, double p_cz,
                         const Matrix& ideal) {
  if (targets.size() != 2) throw std::invalid_argument("CZ needs two targets");
  if (targets[0] == targets[1]) {
    throw std::invalid_argument("CZ targets overlap");
  }
  require_qubit(rho, targets[0]);
  require_qubit(rho, targets[1]);
  require_probability(p_cz);

  const DensityOperator gated = qmat::apply_unitary(rho, ideal, targets);
  if (p_cz == 0.0) return gated;
  const auto pair = [](const Matrix& a) -> Matrix {
    return Eigen::kroneckerProduct(a, a).eval();
  };
  const std::pair<double, Matrix> terms[] = {
      {1.0 - p_cz, qmat::gates::identity(4)},
      {p_cz / 3.0, pair(pauli_x())},
      {p_cz / 3.0, pair(pauli_y())},
      {p_cz / 3.0, pair(pauli_z())},
  };
  return qmat::apply_mixture(gated, terms, targets);
}

double dephasing_factor(double t, double T_coh) {
  if (!(t >= 0.0)) throw std::invalid_argument("dephasing time must be >= 0");
  if (!(T_coh > 0.0)) throw std::invalid_argument("coherence time must be > 0");
  return std::exp(-t / T_coh);
}

DensityOperator dephase_by_factor(const DensityOperator& rho,
                                  const std::string& target, double factor,
                                  Axis axis) {
  require_qubit(rho, target);
  if (!(factor >= 0.0 && factor <= 1.0)) {
    throw std::invalid_argument("dephasing factor must lie in [0, 1]");
  }
  if (factor == 1.0) return rho;
  const std::pair<double, Matrix> terms[] = {
      {(1.0 + factor) / 2.0, qmat::gates::identity(2)},
      {(1.0 - factor) / 2.0, axis_pauli(axis)},
  };
  const std::string t[] = {target};
  return qmat::apply_mixture(rho, terms, t);
}

DensityOperator dephase(const DensityOperator& rho, const std::string& target,
                        double t, double T_coh, Axis axis) {
  return dephase_by_factor(rho, target, dephasing_factor(t, T_coh), axis);
}

double expected_wait_dephasing(double p_succ, double T_clock, double T_coh) {
  if (!(p_succ > 0.0 && p_succ <= 1.0)) {
    throw std::invalid_argument("success probability must lie in (0, 1]");
  }
  const double d = dephasing_factor(T_clock, T_coh);
  // 1 - (1 - p) d written as p d + (1 - d) stays exact when d -> 1.
  const double loss = -std::expm1(-T_clock / T_coh);
  return p_succ * d / (p_succ * d + loss);
}

}  // namespace maqkd::noise
