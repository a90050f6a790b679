#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <map>

#include "maqkd/photonics.hpp"
#include "maqkd/protocol.hpp"
#include "click_oracle.hpp"
#include "support.hpp"

using namespace maqkd;
using namespace maqkd::photonics;
using qmat::Complex;
using qmat::Register;
using qmat::Vector;
using maqkd::testing::ket;
using maqkd::testing::max_abs;
using maqkd::testing::random_state;

namespace {

using maqkd::testing::kMinusA;
using maqkd::testing::kMinusB;
using maqkd::testing::kPlusA;
using maqkd::testing::kPlusB;
using maqkd::testing::oracle_heralds;
using maqkd::testing::pattern_distribution;

qmat::Matrix photon_marginal(const DensityOperator& joint) {
  const std::array<std::string, 2> keep{kUserPhoton, kMemoryPhoton};
  return qmat::partial_trace(joint, keep).matrix();
}

DensityOperator loaded_joint(int bit, Basis basis, double L_side, const PhysicalParams& p) {
  auto memory = double_encoder_state(p.optics.eta);
  memory = photon_loss(memory, kMemoryPhoton, p.optics.eta_s * p.optics.eta_c);
  return qmat::tensor(user_photon_state(bit, basis, L_side, p.optics.L_att), memory);
}

}  // namespace

TEST_CASE("double encoder examples") {
  const double r = 1.0 / std::sqrt(2.0);
  // (photon, electron): |H>|s_0> + |V>|s_+1>, indices photon * 2 + spin.
  Vector psi2 = Vector::Zero(6);
  psi2(kH * 2 + 0) = r;
  psi2(kV * 2 + 1) = r;
  CHECK(double_encoder_state(1.0).fidelity_to(psi2) == doctest::Approx(1.0).epsilon(1e-14));

  const auto lost = double_encoder_state(0.0);
  qmat::Matrix expect = qmat::Matrix::Zero(6, 6);
  expect(kVac * 2, kVac * 2) = 0.5;
  expect(kVac * 2 + 1, kVac * 2 + 1) = 0.5;
  CHECK(max_abs(lost.matrix() - expect) < 1e-15);

  const auto nominal = double_encoder_state(0.9);
  double present = 0.0;
  for (int i = 0; i < 4; ++i) present += nominal(i, i).real();
  CHECK(present == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(nominal.invariant_error() < 1e-12);
}

TEST_CASE("user photon examples") {
  const auto z = user_photon_state(1, Basis::Z, 0.0, 25.0);
  CHECK(z.purity() == doctest::Approx(1.0));
  CHECK(z(kV, kV).real() == doctest::Approx(1.0));

  const auto lossy = user_photon_state(0, Basis::Z, 25.0, 25.0);
  CHECK(lossy(kH, kH).real() == doctest::Approx(0.36788).epsilon(1e-5));
  CHECK(lossy(kVac, kVac).real() == doctest::Approx(1.0 - std::exp(-1.0)));

  const auto d = user_photon_state(0, Basis::X, 0.0, 25.0);
  for (int a : {kH, kV}) {
    for (int b : {kH, kV}) CHECK(d(a, b).real() == doctest::Approx(0.5));
  }
  CHECK(user_photon_state(1, Basis::X, 0.0, 25.0)(kH, kV).real() == doctest::Approx(-0.5));
}

TEST_CASE("dark click probability examples") {
  OpticalParams o;
  CHECK(dark_click_probability(o) == doctest::Approx(1e-9));
  o.dark_rate = 0.0;
  CHECK(dark_click_probability(o) == 0.0);
  o.dark_rate = 100.0;
  o.gate_window = 10e-9;
  CHECK(dark_click_probability(o) == doctest::Approx(1e-6));
}

TEST_CASE("click pattern classification") {
  int plus = 0, minus = 0;
  for (int p = 0; p < 16; ++p) {
    const ClickPattern c{bool(p & 1), bool(p & 2), bool(p & 4), bool(p & 8)};
    const auto h = classify(c);
    plus += h == Herald::PsiPlus;
    minus += h == Herald::PsiMinus;
    if (p == kPlusA || p == kPlusB) CHECK(h == Herald::PsiPlus);
    if (p == kMinusA || p == kMinusB) CHECK(h == Herald::PsiMinus);
  }
  CHECK(plus == 2);
  CHECK(minus == 2);
}

TEST_CASE("side BSM examples") {
  PhysicalParams ideal;
  ideal.optics = {1.0, 1.0, 1.0, 1.0, 0.0};
  const auto out = side_bsm(loaded_joint(0, Basis::X, 0.0, ideal), ideal.optics);
  REQUIRE(out.size() == 3);
  CHECK(out[0].probability + out[1].probability == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(out[2].herald == Herald::Fail);
  CHECK(out[0].probability + out[1].probability + out[2].probability ==
        doctest::Approx(1.0).epsilon(1e-12));

  // Vacuum in both arms: only dark clicks can herald.
  OpticalParams dark;
  dark.dark_rate = 1e7;
  const double p = dark_click_probability(dark);
  const std::array<int, 3> vac{kVac, kVac, 0};
  const auto vacuum = DensityOperator::basis(
      Register({photon_mode(kUserPhoton), photon_mode(kMemoryPhoton), {kElectron, 2}}), vac);
  const auto v = side_bsm(vacuum, dark);
  CHECK(v[0].probability + v[1].probability ==
        doctest::Approx(4.0 * p * p * (1.0 - p) * (1.0 - p)).epsilon(1e-12));

  OpticalParams blind;
  blind.eta_d = 0.0;
  blind.dark_rate = 0.0;
  const auto b = side_bsm(loaded_joint(1, Basis::Z, 0.0, ideal), blind);
  CHECK(b[0].probability == 0.0);
  CHECK(b[1].probability == 0.0);
  CHECK_FALSE(b[0].conditioned_state.has_value());

  const auto photons_only = qmat::tensor(user_photon_state(0, Basis::Z, 0, 25),
                                         user_photon_state(0, Basis::Z, 0, 25, 1.0, kMemoryPhoton));
  CHECK_THROWS_AS(side_bsm(photons_only, ideal.optics), std::invalid_argument);
}

TEST_CASE("frame-corrected heralds teleport every BB84 input with unit fidelity") {
  PhysicalParams ideal;
  ideal.optics = {1.0, 1.0, 1.0, 1.0, 0.0};
  for (auto basis : {Basis::Z, Basis::X}) {
    for (int bit : {0, 1}) {
      const auto pol = bb84_polarization(bit, basis);
      const Vector expected = ket({pol(kH), pol(kV)});
      const auto out = side_bsm(loaded_joint(bit, basis, 0.0, ideal), ideal.optics);
      for (int h = 0; h < 2; ++h) {
        CHECK(out[h].probability == doctest::Approx(0.25).epsilon(1e-12));
        const auto e = apply_frame(*out[h].conditioned_state, out[h].pauli_frame);
        CHECK(e.fidelity_to(expected) == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("POVM agrees with exhaustive click-pattern enumeration") {
  std::mt19937_64 rng(42);
  const Register photons({photon_mode(kUserPhoton), photon_mode(kMemoryPhoton)});
  const std::array<std::pair<double, double>, 10> grid{{{1.0, 0.0},
                                                       {0.93, 1e-9},
                                                       {0.93, 1e-3},
                                                       {0.5, 0.05},
                                                       {0.1, 0.2},
                                                       {0.0, 0.3},
                                                       {0.0, 0.0},
                                                       {0.75, 0.0},
                                                       {0.99, 0.5},
                                                       {0.3, 1.0}}};
  for (auto [eta_d, p_dc] : grid) {
    const auto povm = side_bsm_povm(eta_d, p_dc);
    for (int trial = 0; trial < 20; ++trial) {
      const auto rho = random_state(photons, rng).matrix();
      const auto [plus, minus] = oracle_heralds(rho, eta_d, p_dc);
      CHECK(std::abs((povm.psi_plus * rho).trace().real() - plus) < 1e-12);
      CHECK(std::abs((povm.psi_minus * rho).trace().real() - minus) < 1e-12);
      double total = 0.0;
      for (auto [_, p] : pattern_distribution(rho, eta_d, p_dc)) total += p;
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }

    // Same comparison through the full joint-state path.
    PhysicalParams params;
    params.optics.eta_d = eta_d;
    params.optics.gate_window = 1.0;
    params.optics.dark_rate = p_dc;
    for (double L : {0.0, 60.0}) {
      const auto joint = loaded_joint(1, Basis::X, L, params);
      const auto out = side_bsm(joint, params.optics);
      const auto [plus, minus] = oracle_heralds(photon_marginal(joint), eta_d, p_dc);
      CHECK(std::abs(out[0].probability - plus) < 1e-12);
      CHECK(std::abs(out[1].probability - minus) < 1e-12);
    }
  }
}

TEST_CASE("POVM elements are valid effects") {
  for (double eta_d : {0.0, 0.5, 0.93, 1.0}) {
    for (double p_dc : {0.0, 1e-6, 0.3}) {
      const auto povm = side_bsm_povm(eta_d, p_dc);
      for (const auto* E : {&povm.psi_plus, &povm.psi_minus}) {
        CHECK(max_abs(*E - E->adjoint()) < 1e-14);
        Eigen::SelfAdjointEigenSolver<qmat::Matrix> es(*E);
        CHECK(es.eigenvalues().minCoeff() > -1e-12);
        CHECK(es.eigenvalues().maxCoeff() < 1.0 + 1e-12);
      }
      Eigen::SelfAdjointEigenSolver<qmat::Matrix> sum(povm.psi_plus + povm.psi_minus);
      CHECK(sum.eigenvalues().maxCoeff() < 1.0 + 1e-12);
    }
  }
}

TEST_CASE("loading probability is monotone in distance and efficiencies") {
  PhysicalParams base;
  double prev = 1.0;
  for (double L = 0.0; L <= 400.0; L += 20.0) {
    const double p = protocol::load_side(0, Basis::Z, L, base).probability;
    CHECK(p <= prev + 1e-15);
    prev = p;
  }
  double OpticalParams::*fields[] = {&OpticalParams::eta, &OpticalParams::eta_s,
                                     &OpticalParams::eta_c, &OpticalParams::eta_d};
  for (auto field : fields) {
    double last = 0.0;
    for (double v = 0.1; v <= 1.0 + 1e-12; v += 0.1) {
      PhysicalParams p = base;
      p.optics.*field = std::min(v, 1.0);
      const double prob = protocol::load_side(1, Basis::X, 50.0, p).probability;
      CHECK(prob >= last - 1e-15);
      last = prob;
    }
  }
}
