#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>

#include "maqkd/protocol.hpp"
#include "support.hpp"

using namespace maqkd;
using namespace maqkd::protocol;
using qmat::Complex;
using qmat::Register;
using qmat::Vector;
using maqkd::testing::ket;
using maqkd::testing::max_abs;

namespace {

const double kR = 1.0 / std::sqrt(2.0);

PhysicalParams noiseless() {
  PhysicalParams p;
  p.gates = {0.0, 0.0, 0.0};
  p.coherence.T_n = INFINITY;
  p.optics.dark_rate = 0.0;
  return p;
}

PhysicalParams noiseless_optics() {
  auto p = noiseless();
  p.optics.eta = p.optics.eta_s = p.optics.eta_c = p.optics.eta_d = 1.0;
  return p;
}

DensityOperator electron(const Vector& v) {
  return DensityOperator::pure(Register({{kElectron, 2}}), v);
}

// Electron state encoding a BB84 input: Z -> |s_0>/|s_+1>, X -> |+>/|->.
DensityOperator bb84_electron(Basis basis, int bit) {
  if (basis == Basis::Z) return electron(bit == 0 ? ket({1, 0}) : ket({0, 1}));
  return electron(bit == 0 ? ket({kR, kR}) : ket({kR, -kR}));
}

FinalBsmDistribution run_pair(Basis basis, int a, int c, const PhysicalParams& p) {
  const auto nuclear = transfer_to_nuclear(bb84_electron(basis, a), p);
  return final_bsm(qmat::tensor(bb84_electron(basis, c), nuclear), p);
}

}  // namespace

TEST_CASE("hyperfine phase examples") {
  const double A = HyperfineParams{}.A_net;
  CHECK(max_abs(hyperfine_unitary(0.0, A) - qmat::Matrix::Identity(4, 4)) == 0.0);
  CHECK(max_abs(hyperfine_unitary(std::numbers::pi / A, A) - qmat::gates::cz()) < 1e-15);
  const auto half = hyperfine_unitary(std::numbers::pi / (2.0 * A), A);
  CHECK(std::abs(half(3, 3) - Complex(0.0, 1.0)) < 1e-15);
  CHECK(std::abs(half(2, 2) - 1.0) == 0.0);
  CHECK(HyperfineParams{}.cz_time() == doctest::Approx(165e-9));
}

TEST_CASE("load_side examples") {
  const auto ideal = noiseless_optics();
  for (auto basis : {Basis::Z, Basis::X}) {
    for (int bit : {0, 1}) {
      const auto r = load_side(bit, basis, 0.0, ideal);
      CHECK(r.probability == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(max_abs(r.electron->matrix() - bb84_electron(basis, bit).matrix()) < 1e-10);
    }
  }

  auto blind = noiseless();
  blind.optics.eta_d = 0.0;
  const auto none = load_side(0, Basis::Z, 0.0, blind);
  CHECK(none.probability == 0.0);
  CHECK_FALSE(none.electron.has_value());
  CHECK_THROWS_AS(compute_observables(blind, 10.0), DegenerateLoading);

  const auto nominal = noiseless();
  const double p0 = load_side(1, Basis::X, 0.0, nominal).probability;
  const double p50 = load_side(1, Basis::X, 50.0, nominal).probability;
  CHECK(p50 / p0 == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("transfer_to_nuclear examples") {
  const auto p = noiseless();
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector v = ket({Complex(n(rng), n(rng)), Complex(n(rng), n(rng))}).normalized();
    const auto nuclear = transfer_to_nuclear(electron(v), p);
    const Vector expected = ket({kR * (v(0) + v(1)), kR * (v(0) - v(1))});
    CHECK(nuclear.fidelity_to(expected) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(nuclear.reg()[0].name == kNuclear);
  }

  const auto plus = transfer_to_nuclear(electron(ket({1, 0})), p);
  CHECK(plus.fidelity_to(ket({kR, kR})) == doctest::Approx(1.0).epsilon(1e-14));

  auto cz_only = p;
  cz_only.gates.p_cz = 2e-4;
  const auto noisy = transfer_to_nuclear(electron(ket({1, 0})), cz_only);
  CHECK(noisy.fidelity_to(ket({kR, kR})) == doctest::Approx(1.0 - 2.0 * 2e-4 / 3.0).epsilon(1e-12));
}

TEST_CASE("noiseless pipeline reproduces every decoding-table row") {
  const auto p = noiseless();
  for (int a : {0, 1}) {
    for (int c : {0, 1}) {
      const auto z = run_pair(Basis::Z, a, c, p);
      CHECK(z.nuclear(a ^ c) == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(z.electron(0) == doctest::Approx(0.5).epsilon(1e-10));

      const auto x = run_pair(Basis::X, a, c, p);
      CHECK(x.electron(a ^ c) == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(x.nuclear(0) == doctest::Approx(0.5).epsilon(1e-10));
      CHECK(decoding_error(Basis::X, a, c, x) < 1e-10);
      CHECK(decoding_error(Basis::Z, a, c, z) < 1e-10);
    }
  }
}

TEST_CASE("final BSM distributions sum to one") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 0.1);
  for (int trial = 0; trial < 40; ++trial) {
    PhysicalParams p;
    p.gates = {u(rng), u(rng), u(rng)};
    const auto rho = maqkd::testing::random_state(
        Register({{kElectron, 2}, {kNuclear, 2}}), rng);
    CHECK(final_bsm(rho, p).total() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("observables examples") {
  auto p = noiseless();
  for (double L : {0.0, 120.0}) {
    const auto obs = compute_observables(p, L);
    CHECK(obs.e_X < 1e-12);
    CHECK(obs.e_Z < 1e-12);
    CHECK(obs.Y_11 == 1.0);
    CHECK(obs.N_L == doctest::Approx(1.0 / obs.P_A + 1.0 / obs.P_B));
    CHECK(obs.N_r == 62);
  }

  // Storage dephasing with a single Bob round.
  p.coherence.T_n = 5e-6;
  const auto side = load_all(0.0, noiseless_optics());
  const double m = storage_factor(1.0, p);
  const auto& t = p.timing;
  CHECK(m == doctest::Approx(std::exp(-(t.period() + t.tau_swap + t.tau_BSM) / 5e-6)));
  const auto q = qber(side, side, m, p);
  CHECK(q.e_x == doctest::Approx((1.0 - m) / 2.0).epsilon(1e-12));
  CHECK(q.e_z < 1e-12);

  const auto nominal = compute_observables(PhysicalParams{}, 0.0);
  CHECK(nominal.e_X < 0.01);
  CHECK(nominal.e_Z < 0.01);
  CHECK(nominal.e_X > 0.0);
}

TEST_CASE("e_Z does not see nuclear dephasing") {
  PhysicalParams a, b;
  a.coherence.T_n = 1e-4;
  b.coherence.T_n = INFINITY;
  const auto oa = compute_observables(a, 200.0);
  const auto ob = compute_observables(b, 200.0);
  CHECK(oa.e_Z == doctest::Approx(ob.e_Z).epsilon(1e-12));
  CHECK(oa.e_X > ob.e_X + 0.01);
}

TEST_CASE("QBER is monotone in each gate error") {
  double GateErrorParams::*fields[] = {&GateErrorParams::p_e, &GateErrorParams::p_n,
                                       &GateErrorParams::p_cz};
  for (auto field : fields) {
    double last_x = 0.0, last_z = 0.0;
    for (double v : {0.0, 1e-3, 5e-3, 1e-2, 3e-2, 0.1}) {
      PhysicalParams p;
      p.gates.*field = v;
      const auto obs = compute_observables(p, 100.0);
      CHECK(obs.e_X >= last_x - 1e-15);
      CHECK(obs.e_Z >= last_z - 1e-15);
      last_x = obs.e_X;
      last_z = obs.e_Z;
    }
  }
}

TEST_CASE("electron dephasing is applied only when T_e is set") {
  PhysicalParams p;
  const auto base = compute_observables(p, 50.0);
  p.coherence.T_e = 1e-6;
  const auto with = compute_observables(p, 50.0);
  CHECK(with.e_X > base.e_X);
}

TEST_CASE("readout rounds") {
  CHECK(readout_rounds(TimingParams{}) == 62);
  TimingParams exact;
  exact.tau_swap = 0.0;
  exact.tau_BSM = 42.5e-9 * 3 - exact.tau_init;
  CHECK(readout_rounds(exact) == 3);
}
