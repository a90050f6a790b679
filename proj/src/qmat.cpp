#include "maqkd/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_set>

namespace maqkd::qmat {

Register::Register(std::vector<Subsystem> subsystems)
    : subsystems_(std::move(subsystems)) {
  std::unordered_set<std::string> seen;
  for (const auto& s : subsystems_) {
    if (s.dim < 2) {
      throw std::invalid_argument("subsystem '" + s.name + "' has dim < 2");
    }
    if (!seen.insert(s.name).second) {
      throw std::invalid_argument("duplicate subsystem name '" + s.name + "'");
    }
    dim_ *= s.dim;
  }
}

bool Register::contains(std::string_view name) const {
  return std::any_of(subsystems_.begin(), subsystems_.end(),
                     [&](const Subsystem& s) { return s.name == name; });
}

std::size_t Register::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    if (subsystems_[i].name == name) return i;
  }
  throw std::invalid_argument("unknown subsystem '" + std::string(name) + "'");
}

namespace {

// Digits of a composite index, most significant first.
std::vector<int> digits_of(const Register& reg, int index) {
  std::vector<int> d(reg.size());
  for (std::size_t k = reg.size(); k-- > 0;) {
    d[k] = index % reg[k].dim;
    index /= reg[k].dim;
  }
  return d;
}

// Maps full-space indices to (target sub-index, rest sub-index).
struct Split {
  std::vector<int> target;
  std::vector<int> rest;
  int target_dim = 1;
  int rest_dim = 1;
};

Split split_indices(const Register& reg, std::span<const std::string> targets) {
  std::vector<std::size_t> tpos;
  for (const auto& t : targets) {
    auto p = reg.index_of(t);
    if (std::find(tpos.begin(), tpos.end(), p) != tpos.end()) {
      throw std::invalid_argument("repeated target '" + t + "'");
    }
    tpos.push_back(p);
  }
  std::vector<std::size_t> rpos;
  for (std::size_t k = 0; k < reg.size(); ++k) {
    if (std::find(tpos.begin(), tpos.end(), k) == tpos.end()) rpos.push_back(k);
  }

  Split s;
  for (auto p : tpos) s.target_dim *= reg[p].dim;
  for (auto p : rpos) s.rest_dim *= reg[p].dim;
  s.target.resize(reg.dim());
  s.rest.resize(reg.dim());
  for (int i = 0; i < reg.dim(); ++i) {
    auto d = digits_of(reg, i);
    int t = 0;
    for (auto p : tpos) t = t * reg[p].dim + d[p];
    int r = 0;
    for (auto p : rpos) r = r * reg[p].dim + d[p];
    s.target[i] = t;
    s.rest[i] = r;
  }
  return s;
}

}  // namespace

DensityOperator::DensityOperator(Register reg, Matrix entries, NoCheck)
    : reg_(std::move(reg)), entries_(std::move(entries)) {}

DensityOperator DensityOperator::unchecked(Register reg, Matrix entries) {
  return DensityOperator(std::move(reg), std::move(entries), NoCheck{});
}

DensityOperator::DensityOperator(Register reg, Matrix entries)
    : reg_(std::move(reg)), entries_(std::move(entries)) {
  if (entries_.rows() != reg_.dim() || entries_.cols() != reg_.dim()) {
    throw std::invalid_argument("density matrix size does not match register");
  }
  if (invariant_error() > Tolerance::kInvariant) {
    throw std::invalid_argument("density matrix is not unit-trace Hermitian");
  }
  if (min_eigenvalue() < Tolerance::kEigenFloor) {
    throw std::invalid_argument("density matrix is not positive semidefinite");
  }
}

DensityOperator DensityOperator::pure(Register reg, const Vector& ket) {
  if (ket.size() != reg.dim()) {
    throw std::invalid_argument("ket size does not match register");
  }
  const Vector k = ket / ket.norm();
  return DensityOperator(std::move(reg), k * k.adjoint());
}

DensityOperator DensityOperator::basis(Register reg, std::span<const int> levels) {
  if (levels.size() != reg.size()) {
    throw std::invalid_argument("one level per subsystem required");
  }
  int idx = 0;
  for (std::size_t k = 0; k < reg.size(); ++k) {
    if (levels[k] < 0 || levels[k] >= reg[k].dim) {
      throw std::invalid_argument("basis level out of range");
    }
    idx = idx * reg[k].dim + levels[k];
  }
  Vector ket = Vector::Zero(reg.dim());
  ket(idx) = 1.0;
  return pure(std::move(reg), ket);
}

DensityOperator DensityOperator::maximally_mixed(Register reg) {
  const int d = reg.dim();
  return DensityOperator(std::move(reg), Matrix::Identity(d, d) / double(d));
}

double DensityOperator::purity() const {
  return (entries_ * entries_).trace().real();
}

double DensityOperator::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double DensityOperator::fidelity_to(const Vector& ket) const {
  const Vector k = ket / ket.norm();
  return (k.adjoint() * entries_ * k)(0, 0).real();
}

double DensityOperator::invariant_error() const {
  const double tr = std::abs(entries_.trace() - Complex(1.0, 0.0));
  const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  return std::max(tr, herm);
}

Matrix embed(const Register& reg, const Matrix& op,
             std::span<const std::string> targets) {
  const Split s = split_indices(reg, targets);
  if (op.rows() != s.target_dim || op.cols() != s.target_dim) {
    throw std::invalid_argument("operator dimension does not match targets");
  }
  const int D = reg.dim();
  Matrix full = Matrix::Zero(D, D);
  for (int r = 0; r < D; ++r) {
    for (int c = 0; c < D; ++c) {
      if (s.rest[r] == s.rest[c]) full(r, c) = op(s.target[r], s.target[c]);
    }
  }
  return full;
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  std::vector<Subsystem> subs = a.reg().subsystems();
  for (const auto& s : b.reg().subsystems()) {
    if (a.reg().contains(s.name)) {
      throw std::invalid_argument("name collision in tensor: '" + s.name + "'");
    }
    subs.push_back(s);
  }
  const Matrix& A = a.matrix();
  const Matrix& B = b.matrix();
  Matrix K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    }
  }
  return DensityOperator::unchecked(Register(std::move(subs)), std::move(K));
}

DensityOperator apply_unitary(const DensityOperator& rho, const Matrix& U,
                              std::span<const std::string> targets) {
  const Matrix E = embed(rho.reg(), U, targets);
  return DensityOperator::unchecked(rho.reg(), E * rho.matrix() * E.adjoint());
}

DensityOperator apply_unitary(const DensityOperator& rho, const Matrix& U,
                              const std::string& target) {
  const std::string t[] = {target};
  return apply_unitary(rho, U, t);
}

DensityOperator apply_mixture(const DensityOperator& rho,
                              std::span<const std::pair<double, Matrix>> terms,
                              std::span<const std::string> targets) {
  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  for (const auto& [w, K] : terms) {
    if (w == 0.0) continue;
    const Matrix E = embed(rho.reg(), K, targets);
    out += w * (E * rho.matrix() * E.adjoint());
  }
  return DensityOperator::unchecked(rho.reg(), std::move(out));
}

DensityOperator partial_trace(const DensityOperator& rho,
                              std::span<const std::string> keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep is empty");
  const Split s = split_indices(rho.reg(), keep);

  std::vector<Subsystem> kept;
  for (const auto& k : keep) kept.push_back(rho.reg()[rho.reg().index_of(k)]);

  const int D = rho.dim();
  Matrix out = Matrix::Zero(s.target_dim, s.target_dim);
  for (int r = 0; r < D; ++r) {
    for (int c = 0; c < D; ++c) {
      if (s.rest[r] == s.rest[c]) out(s.target[r], s.target[c]) += rho(r, c);
    }
  }
  return DensityOperator::unchecked(Register(std::move(kept)), std::move(out));
}

std::vector<MeasurementBranch> projective_measure(
    const DensityOperator& rho, std::span<const Matrix> projectors,
    std::span<const std::string> targets) {
  if (projectors.empty()) throw std::invalid_argument("no projectors given");
  const Eigen::Index d = projectors.front().rows();
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& P : projectors) {
    if (P.rows() != d || P.cols() != d) {
      throw std::invalid_argument("projector dimensions differ");
    }
    sum += P;
  }
  if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > Tolerance::kInvariant) {
    throw std::invalid_argument("incomplete projector set");
  }

  std::vector<MeasurementBranch> out;
  out.reserve(projectors.size());
  for (const auto& P : projectors) {
    const Matrix E = embed(rho.reg(), P, targets);
    Matrix post = E * rho.matrix() * E.adjoint();
    const double p = post.trace().real();
    MeasurementBranch b;
    b.probability = std::max(p, 0.0);
    if (p > 1e-14) {
      b.state = DensityOperator::unchecked(rho.reg(), post / p);
    }
    out.push_back(std::move(b));
  }
  return out;
}

namespace gates {

Matrix identity(int dim) { return Matrix::Identity(dim, dim); }

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix cz() {
  Matrix m = Matrix::Identity(4, 4);
  m(3, 3) = -1.0;
  return m;
}

Matrix ry(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Matrix m(2, 2);
  m << c, -s, s, c;
  return m;
}

std::vector<Matrix> computational_projectors(int dim) {
  std::vector<Matrix> out;
  for (int k = 0; k < dim; ++k) {
    Matrix P = Matrix::Zero(dim, dim);
    P(k, k) = 1.0;
    out.push_back(std::move(P));
  }
  return out;
}

}  // namespace gates
}  // namespace maqkd::qmat
