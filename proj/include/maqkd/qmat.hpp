#pragma once

// Dense density-operator algebra over small labeled registers.

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace maqkd::qmat {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct Tolerance {
  static constexpr double kInvariant = 1e-10;
  static constexpr double kEigenFloor = -1e-9;
};

struct Subsystem {
  std::string name;
  int dim = 2;

  friend bool operator==(const Subsystem&, const Subsystem&) = default;
};

// Ordered list of subsystems. Index 0 is the most significant digit of the
// composite basis index.
class Register {
 public:
  Register() = default;
  explicit Register(std::vector<Subsystem> subsystems);

  const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  std::size_t size() const { return subsystems_.size(); }
  int dim() const { return dim_; }
  bool contains(std::string_view name) const;
  // Throws std::invalid_argument for unknown names.
  std::size_t index_of(std::string_view name) const;
  const Subsystem& operator[](std::size_t i) const { return subsystems_[i]; }

  friend bool operator==(const Register&, const Register&) = default;

 private:
  std::vector<Subsystem> subsystems_;
  int dim_ = 1;
};

class DensityOperator {
 public:
  // Validates trace, Hermiticity and positivity at the module tolerances.
  DensityOperator(Register reg, Matrix entries);

  static DensityOperator pure(Register reg, const Vector& ket);
  // Computational basis state; one index per subsystem.
  static DensityOperator basis(Register reg, std::span<const int> levels);
  static DensityOperator maximally_mixed(Register reg);

  const Register& reg() const { return reg_; }
  const Matrix& matrix() const { return entries_; }
  int dim() const { return reg_.dim(); }
  Complex operator()(int r, int c) const { return entries_(r, c); }

  double trace() const { return entries_.trace().real(); }
  double purity() const;
  double min_eigenvalue() const;
  double fidelity_to(const Vector& ket) const;
  // Max deviation from trace one and from Hermiticity.
  double invariant_error() const;

  // Skips validation; for results of channels that preserve the invariants.
  static DensityOperator unchecked(Register reg, Matrix entries);

 private:
  struct NoCheck {};
  DensityOperator(Register reg, Matrix entries, NoCheck);

  Register reg_;
  Matrix entries_;
};

// Embeds `op` acting on `targets` (in the given order) into the full space.
Matrix embed(const Register& reg, const Matrix& op,
             std::span<const std::string> targets);

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

DensityOperator apply_unitary(const DensityOperator& rho, const Matrix& U,
                              std::span<const std::string> targets);
DensityOperator apply_unitary(const DensityOperator& rho, const Matrix& U,
                              const std::string& target);

// rho -> sum_k weight_k * K_k rho K_k^dagger with K_k embedded on targets.
// Weights and operators must form a trace-preserving map; not re-checked.
DensityOperator apply_mixture(const DensityOperator& rho,
                              std::span<const std::pair<double, Matrix>> terms,
                              std::span<const std::string> targets);

DensityOperator partial_trace(const DensityOperator& rho,
                              std::span<const std::string> keep);

struct MeasurementBranch {
  double probability = 0.0;
  // Empty when the branch has (numerically) zero probability.
  std::optional<DensityOperator> state;
};

std::vector<MeasurementBranch> projective_measure(
    const DensityOperator& rho, std::span<const Matrix> projectors,
    std::span<const std::string> targets);

namespace gates {
Matrix identity(int dim);
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix cz();
// R_y(theta) = exp(-i theta Y / 2).
Matrix ry(double theta);
// Projectors onto computational basis levels of a `dim`-level system.
std::vector<Matrix> computational_projectors(int dim);
}  // namespace gates

}  // namespace maqkd::qmat
