#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>

#include "maqkd/noise.hpp"
#include "maqkd/timeline_mc.hpp"
#include "support.hpp"

using namespace maqkd;
using namespace maqkd::qmat;
using maqkd::testing::ket;
using maqkd::testing::max_abs;
using maqkd::testing::qubits;
using maqkd::testing::random_state;
using maqkd::testing::random_unitary;

namespace {

const std::array<int, 1> kZero{0};
const double kR = 1.0 / std::sqrt(2.0);

DensityOperator plus_state() { return DensityOperator::pure(qubits({"q"}), ket({kR, kR})); }

}  // namespace

TEST_CASE("depolarizing gate examples") {
  std::mt19937_64 rng(11);
  const auto rho = random_state(qubits({"q"}), rng);
  const Matrix U = random_unitary(2, rng);
  const auto ideal = apply_unitary(rho, U, "q");
  CHECK(max_abs(noise::depolarizing_gate(rho, "q", U, 0.0).matrix() - ideal.matrix()) < 1e-15);

  const auto pure = random_state(qubits({"q"}), rng, true);
  const auto mixed = noise::depolarizing_gate(pure, "q", gates::identity(2), 0.75);
  CHECK(max_abs(mixed.matrix() - Matrix::Identity(2, 2) / 2.0) < 1e-12);

  const auto zero = DensityOperator::basis(qubits({"q"}), kZero);
  const auto d = noise::depolarizing_gate(zero, "q", gates::identity(2), 1e-3);
  CHECK(d(0, 0).real() == doctest::Approx(0.9993333333).epsilon(1e-10));
  CHECK(d(1, 1).real() == doctest::Approx(0.0006666667).epsilon(1e-8));

  const auto qutrit = DensityOperator::maximally_mixed(Register({{"p", 3}}));
  CHECK_THROWS_AS(noise::depolarizing_gate(qutrit, "p", gates::identity(3), 0.1),
                  std::invalid_argument);
}

TEST_CASE("noisy CZ examples") {
  const std::array<std::string, 2> t{"e", "n"};
  const auto pp = DensityOperator::pure(qubits({"e", "n"}), ket({0.5, 0.5, 0.5, 0.5}));
  const auto ent = noise::noisy_cz(pp, t, 0.0);
  CHECK(ent.fidelity_to(ket({0.5, 0.5, 0.5, -0.5})) == doctest::Approx(1.0).epsilon(1e-14));
  const std::array<std::string, 1> e{"e"};
  CHECK(partial_trace(ent, e).purity() == doctest::Approx(0.5));

  const std::array<int, 2> zz{0, 0};
  const auto z = noise::noisy_cz(DensityOperator::basis(qubits({"e", "n"}), zz), t, 0.3);
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 0) = 1.0 - 0.2;
  expect(3, 3) = 0.2;
  CHECK(max_abs(z.matrix() - expect) < 1e-15);

  const std::array<std::string, 2> same{"e", "e"};
  CHECK_THROWS_AS(noise::noisy_cz(pp, same, 0.1), std::invalid_argument);
}

TEST_CASE("dephasing examples") {
  const auto plus = plus_state();
  CHECK(max_abs(noise::dephase(plus, "q", 0.0, 1.0).matrix() - plus.matrix()) == 0.0);
  CHECK(max_abs(noise::dephase(plus, "q", 1e6, 1.0).matrix() - Matrix::Identity(2, 2) / 2.0) <
        1e-15);
  const auto one = noise::dephase(plus, "q", 2.0, 2.0);
  CHECK(one(0, 1).real() == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-14));
  CHECK(one(0, 1).real() == doctest::Approx(0.3679 * 0.5).epsilon(1e-4));
  CHECK(one(0, 0).real() == doctest::Approx(0.5));

  // The X axis leaves |+> alone and dephases |0>.
  CHECK(max_abs(noise::dephase(plus, "q", 1.0, 1.0, noise::Axis::X).matrix() - plus.matrix()) <
        1e-15);
  const auto zero = DensityOperator::basis(qubits({"q"}), kZero);
  const auto zx = noise::dephase(zero, "q", 1.0, 1.0, noise::Axis::X);
  CHECK(zx(0, 0).real() == doctest::Approx((1.0 + std::exp(-1.0)) / 2.0));
}

TEST_CASE("expected wait dephasing examples") {
  CHECK(noise::expected_wait_dephasing(1.0, 0.3, 1.0) == doctest::Approx(std::exp(-0.3)));
  CHECK(noise::expected_wait_dephasing(0.2, 1.0, INFINITY) == 1.0);
  CHECK_THROWS_AS(noise::expected_wait_dephasing(0.0, 1.0, 1.0), std::invalid_argument);

  // Oracle: sum the geometric series term by term to convergence.
  double series = 0.0;
  for (int n = 1; n < 2000; ++n) series += 0.5 * std::pow(0.5, n - 1) * std::exp(-0.1 * n);
  const double closed = noise::expected_wait_dephasing(0.5, 0.1, 1.0);
  CHECK(closed == doctest::Approx(series).epsilon(1e-14));
  CHECK(closed == doctest::Approx(0.826213).epsilon(1e-6));
}

TEST_CASE("expected wait dephasing agrees with sampled waits") {
  for (double p : {0.05, 0.3, 0.9}) {
    const double x = 0.02;
    const auto waits = mc::sample_waits(p, 200000, 99);
    double sum = 0.0, sum_sq = 0.0;
    for (auto n : waits) {
      const double v = std::exp(-x * double(n));
      sum += v;
      sum_sq += v * v;
    }
    const double n = double(waits.size());
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / n);
    CHECK(std::abs(mean - noise::expected_wait_dephasing(p, x, 1.0)) < 3.0 * se);
  }
}

TEST_CASE("channels preserve trace, Hermiticity and positivity on random states") {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto reg = qubits({"e", "n"});
  const std::array<std::string, 2> t{"e", "n"};
  const auto ok = [](const DensityOperator& r) {
    return r.invariant_error() < Tolerance::kInvariant &&
           r.min_eigenvalue() > Tolerance::kEigenFloor;
  };
  int failures = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const auto rho = random_state(reg, rng);
    const Matrix U = random_unitary(2, rng);
    const double p = u(rng);
    const auto axis = static_cast<noise::Axis>(trial % 3);
    if (!ok(noise::depolarizing_gate(rho, "e", U, p))) ++failures;
    if (!ok(noise::noisy_cz(rho, t, p))) ++failures;
    if (!ok(noise::dephase_by_factor(rho, "n", u(rng), axis))) ++failures;
    if (!ok(noise::dephase(rho, "e", u(rng), 0.1 + u(rng), axis))) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("depolarizing strictly lowers the purity of pure inputs") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const auto pure = random_state(qubits({"q"}), rng, true);
    const Matrix U = random_unitary(2, rng);
    const double p = 1e-3 + 0.5 * double(trial) / 500.0;
    CHECK(noise::depolarizing_gate(pure, "q", U, p).purity() < 1.0 - 1e-6);
  }
}

TEST_CASE("dephasing composes additively in time") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const auto rho = random_state(qubits({"a", "b"}), rng);
    const double t1 = 0.01 * trial, t2 = 0.5, T = 1.7;
    for (auto axis : {noise::Axis::X, noise::Axis::Y, noise::Axis::Z}) {
      const auto two = noise::dephase(noise::dephase(rho, "b", t1, T, axis), "b", t2, T, axis);
      const auto one = noise::dephase(rho, "b", t1 + t2, T, axis);
      CHECK(max_abs(two.matrix() - one.matrix()) < 1e-12);
    }
  }
}
