#pragma once

// Shared helpers for the unit tests: random states and small comparisons.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "maqkd/qmat.hpp"

namespace maqkd::testing {

using qmat::Complex;
using qmat::DensityOperator;
using qmat::Matrix;
using qmat::Register;
using qmat::Vector;

inline Matrix ginibre(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix g(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) g(r, c) = Complex(n(rng), n(rng));
  }
  return g;
}

// Hilbert-Schmidt random mixed state; rank-one when `pure` is set.
inline DensityOperator random_state(const Register& reg, std::mt19937_64& rng,
                                    bool pure = false) {
  const int d = reg.dim();
  if (pure) {
    std::normal_distribution<double> n(0.0, 1.0);
    Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = Complex(n(rng), n(rng));
    return DensityOperator::pure(reg, v.normalized());
  }
  const Matrix g = ginibre(d, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  return DensityOperator(reg, rho);
}

inline Matrix random_unitary(int d, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(ginibre(d, rng));
  return qr.householderQ() * Matrix::Identity(d, d);
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline Register qubits(std::initializer_list<const char*> names) {
  std::vector<qmat::Subsystem> s;
  for (const char* n : names) s.push_back({n, 2});
  return Register(std::move(s));
}

inline Vector ket(std::initializer_list<Complex> amps) {
  Vector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (auto a : amps) v(i++) = a;
  return v;
}

}  // namespace maqkd::testing
