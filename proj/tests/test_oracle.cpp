#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "entsim/oracle.hpp"
#include "entsim/validate.hpp"
#include "helpers.hpp"

using namespace entsim;
using namespace testutil;

namespace {

constexpr double kPi = 3.141592653589793;
const Complex kI(0.0, 1.0);

}  // namespace

TEST_CASE("lift and lower round-trip exactly") {
  const fock::ModeRegister reg({ModeId{"x"}, ModeId{"y"}}, 2);

  const auto vac = oracle::lift(StateVector::vacuum(reg));
  CHECK(std::abs(vac.amp[0] - Complex(1.0, 0.0)) < 1e-15);
  for (std::size_t i = 1; i < vac.amp.size(); ++i) CHECK(std::abs(vac.amp[i]) == 0.0);

  SplitMix64 rng(31);
  for (int it = 0; it < 10; ++it) {
    const StateVector psi = random_state(reg, rng);
    const StateVector back = oracle::lower(oracle::lift(psi));
    for (const auto& [ket, amp] : psi.amplitudes()) {
      CHECK(std::abs(back.amplitude(ket) - amp) < 1e-14);
    }
  }
}

TEST_CASE("the dense engine refuses registers past the size guard") {
  std::vector<ModeId> modes;
  for (int i = 0; i < 7; ++i) modes.push_back(ModeId{"m" + std::to_string(i)});
  const fock::ModeRegister reg(modes, 2);
  CHECK_THROWS_AS(oracle::lift(StateVector::vacuum(reg)), std::invalid_argument);
}

TEST_CASE("balanced splitter operator at d=1 holds the convention on the photon block") {
  const fock::ModeRegister reg({ModeId{"a"}, ModeId{"b"}}, 1);
  const auto op = oracle::element_operator(
      optics::BeamSplitter{ModeId{"a"}, ModeId{"b"}, 0.5}, reg);
  CHECK(op.dim == 4);

  const double s = 1.0 / std::sqrt(2.0);
  const std::size_t i10 = oracle::ket_to_index(reg, FockKet{1, 0});
  const std::size_t i01 = oracle::ket_to_index(reg, FockKet{0, 1});
  CHECK(std::abs(op.at(i10, i10) - Complex(s, 0.0)) < 1e-15);
  CHECK(std::abs(op.at(i01, i10) - s * kI) < 1e-15);
  CHECK(std::abs(op.at(i10, i01) - s * kI) < 1e-15);
  CHECK(std::abs(op.at(i01, i01) - Complex(s, 0.0)) < 1e-15);

  // |1,1> interferes destructively (both photons bunch) and the bunched
  // pair lies past this cutoff, so that column is empty; the vacuum and
  // one-photon block is exactly unitary.
  const std::size_t i11 = oracle::ket_to_index(reg, FockKet{1, 1});
  for (std::size_t r = 0; r < op.dim; ++r) CHECK(std::abs(op.at(r, i11)) < 1e-15);
}

TEST_CASE("phase shifter operator is the expected diagonal") {
  const fock::ModeRegister reg({ModeId{"a"}}, 2);
  const auto op =
      oracle::element_operator(optics::PhaseShifter{ModeId{"a"}, kPi / 4.0}, reg);
  for (int n = 0; n <= 2; ++n) {
    const std::size_t i = oracle::ket_to_index(reg, FockKet{n});
    CHECK(std::abs(op.at(i, i) - std::polar(1.0, n * kPi / 4.0)) < 1e-15);
  }
}

TEST_CASE("click distribution enumerates outcomes exhaustively") {
  const fock::ModeRegister reg({ModeId{"d1"}, ModeId{"d2"}}, 2);

  const auto quiet = oracle::exact_click_distribution(
      oracle::lift(StateVector::vacuum(reg)), {ModeId{"d1"}, ModeId{"d2"}});
  CHECK(quiet.no_click == doctest::Approx(1.0));
  CHECK(quiet.multi == 0.0);

  StateVector split(reg);
  split.set_amplitude(FockKet{1, 0}, 1.0 / std::sqrt(2.0));
  split.set_amplitude(FockKet{0, 1}, kI / std::sqrt(2.0));
  const auto even = oracle::exact_click_distribution(oracle::lift(split),
                                                     {ModeId{"d1"}, ModeId{"d2"}});
  CHECK(even.single[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(even.single[1] == doctest::Approx(0.5).epsilon(1e-12));

  SplitMix64 rng(32);
  for (int it = 0; it < 10; ++it) {
    const auto dist = oracle::exact_click_distribution(
        oracle::lift(random_state(reg, rng)), {ModeId{"d1"}, ModeId{"d2"}});
    CHECK(dist.total() == doctest::Approx(1.0).epsilon(1e-12));
  }

  CHECK_THROWS_AS(oracle::exact_click_distribution(oracle::lift(split),
                                                   {ModeId{"d1"}, ModeId{"d1"}}),
                  std::invalid_argument);
}

TEST_CASE("uhlmann fidelity agrees with pure-state overlaps") {
  const fock::ModeRegister reg({ModeId{"x"}, ModeId{"y"}}, 2);
  SplitMix64 rng(33);
  for (int it = 0; it < 6; ++it) {
    const StateVector a = random_state(reg, rng);
    const StateVector b = random_state(reg, rng);
    const double overlap2 = std::norm(fock::inner(a, b));

    const auto rho_a = oracle::density_matrix(fock::MixedState(a));
    const auto rho_b = oracle::density_matrix(fock::MixedState(b));
    CHECK(oracle::fidelity(rho_a, rho_b) == doctest::Approx(overlap2).epsilon(1e-9));
    CHECK(oracle::fidelity(rho_a, rho_a) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(oracle::pure_fidelity(a, fock::MixedState(b)) ==
          doctest::Approx(overlap2).epsilon(1e-12));
  }

  // Mixture against a pure reference: weighted overlap.
  const StateVector e0 = StateVector::single_ket(reg, FockKet{0, 0});
  const StateVector e1 = StateVector::single_ket(reg, FockKet{1, 0});
  fock::MixedState mix;
  mix.add(0.3, e0);
  mix.add(0.7, e1);
  CHECK(oracle::pure_fidelity(e1, mix) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(oracle::fidelity(oracle::density_matrix(fock::MixedState(e1)),
                         oracle::density_matrix(mix)) ==
        doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("conditioned correlation from exhaustive enumeration") {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  CHECK(oracle::exact_conditioned_correlation(inv_sqrt2, 0.0, 0.0, 0.3, 0.3) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(oracle::exact_conditioned_correlation(inv_sqrt2, 0.0, 0.0, 0.0,
                                                       kPi / 2.0)) < 1e-12);

  // The enumeration reduces to 2 alpha beta cos(phiL - phiR); the vacuum
  // coefficient drops out of the conditioned value.
  SplitMix64 rng(34);
  for (int it = 0; it < 25; ++it) {
    const double alpha = rng.next_double();
    const double beta = std::sqrt(1.0 - alpha * alpha);
    const double c = rng.next_double() * 2.0;
    const double phi12 = rng.next_double() * 2.0 * kPi;
    const double pl = rng.next_double() * 2.0 * kPi - kPi;
    const double pr = rng.next_double() * 2.0 * kPi - kPi;
    const double e = oracle::exact_conditioned_correlation(alpha, c, phi12, pl, pr);
    CHECK(e == doctest::Approx(2.0 * alpha * beta * std::cos(pl - pr)).epsilon(1e-10));
  }
}

TEST_CASE("conditioned correlation depends on the settings only through their difference") {
  SplitMix64 rng(35);
  for (int it = 0; it < 10; ++it) {
    const double alpha = rng.next_double();
    const double delta = rng.next_double() * 2.0 * kPi - kPi;
    const double base = oracle::exact_conditioned_correlation(alpha, 0.4, 1.1, delta, 0.0);
    for (int k = 1; k <= 3; ++k) {
      const double shift = k * 0.7;
      CHECK(oracle::exact_conditioned_correlation(alpha, 0.4, 1.1, delta + shift,
                                                  shift) ==
            doctest::Approx(base).epsilon(1e-10));
    }
  }
}

TEST_CASE("product states never violate the local bound") {
  SplitMix64 rng(36);
  for (const double alpha : {0.0, 1.0}) {
    for (int it = 0; it < 5; ++it) {
      const double l1 = rng.next_double() * 2.0 * kPi;
      const double l2 = rng.next_double() * 2.0 * kPi;
      const double r1 = rng.next_double() * 2.0 * kPi;
      const double r2 = rng.next_double() * 2.0 * kPi;
      const double s = oracle::exact_conditioned_correlation(alpha, 0.0, 0.0, l1, r1) +
                       oracle::exact_conditioned_correlation(alpha, 0.0, 0.0, l1, r2) +
                       oracle::exact_conditioned_correlation(alpha, 0.0, 0.0, l2, r1) -
                       oracle::exact_conditioned_correlation(alpha, 0.0, 0.0, l2, r2);
      CHECK(std::abs(s) <= 2.0 + 1e-10);
      // One branch only: every coincidence pattern is equally likely.
      CHECK(std::abs(oracle::exact_conditioned_correlation(alpha, 0.0, 0.0, l1, r1)) <
            1e-12);
    }
  }
}

TEST_CASE("coincidence mass of the composed links is 1 / (2 (c+1)^2)") {
  SplitMix64 rng(37);
  for (int it = 0; it < 15; ++it) {
    const double alpha = rng.next_double();
    const double c = rng.next_double() * 2.0;
    const double phi12 = rng.next_double() * 2.0 * kPi;
    const auto p = oracle::exact_coincidence_probabilities(alpha, c, phi12, 0.4, -0.9);
    CHECK(p.coincidence() ==
          doctest::Approx(1.0 / (2.0 * (c + 1.0) * (c + 1.0))).epsilon(1e-10));
  }
}

TEST_CASE("dense loss channel preserves the trace") {
  const fock::ModeRegister reg({ModeId{"m"}}, 2);
  SplitMix64 rng(38);
  for (int it = 0; it < 6; ++it) {
    const auto rho = oracle::density_matrix(fock::MixedState(random_state(reg, rng)));
    const auto lossy = oracle::apply_loss_dense(rho, ModeId{"m"}, 0.35);
    Complex trace(0.0, 0.0);
    for (std::size_t i = 0; i < lossy.dim; ++i) trace += lossy.rho[i * lossy.dim + i];
    CHECK(trace.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(trace.imag()) < 1e-14);
  }
}

TEST_CASE("validation suite passes on a pristine build") {
  const auto report = validate::run_validation(99, 20);
  for (const auto& check : report.checks) {
    INFO(check.name);
    CHECK(check.passed);
  }
  CHECK(report.all_passed());
}
