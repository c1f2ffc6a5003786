#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "entsim/chsh.hpp"
#include "entsim/oracle.hpp"
#include "helpers.hpp"

using namespace entsim;
using namespace testutil;

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kInvSqrt2 = 0.7071067811865476;

// Coincidence-bearing kets of the composed four-mode mixture.
const FockKet kKetCross1{0, 1, 1, 0};  // L2 and R1 excited
const FockKet kKetCross2{1, 0, 0, 1};  // L1 and R2 excited
const FockKet kKetSameL{1, 1, 0, 0};
const FockKet kKetSameR{0, 0, 1, 1};

}  // namespace

TEST_CASE("composed links hold the tunable two-excitation component") {
  SUBCASE("balanced amplitudes at the maximal point") {
    const auto mix = chsh::compose_pne(kInvSqrt2, 0.0, 0.0);
    REQUIRE(mix.components().size() == 1);
    const auto& pure = mix.components()[0].state;
    CHECK(std::abs(std::abs(pure.amplitude(kKetCross1)) -
                   std::abs(pure.amplitude(kKetCross2))) < 1e-12);
  }

  SUBCASE("amplitudes follow (alpha, beta)") {
    const auto mix = chsh::compose_pne(0.6, 0.0, 0.0);
    const auto& pure = mix.components()[0].state;
    // Cross terms carry alpha and beta over the common 1/sqrt(2).
    CHECK(std::abs(pure.amplitude(kKetCross1)) ==
          doctest::Approx(0.6 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::abs(pure.amplitude(kKetCross2)) ==
          doctest::Approx(0.8 / std::sqrt(2.0)).epsilon(1e-12));
  }

  SUBCASE("same-side terms carry no coincidence weight") {
    const auto mix = chsh::compose_pne(0.6, 1.2, 0.5);
    const auto& pure = mix.components()[0].state;
    CHECK(std::abs(pure.amplitude(kKetSameL)) > 0.0);
    CHECK(std::abs(pure.amplitude(kKetSameR)) > 0.0);
    // They sit entirely on one side, so conditioned statistics ignore
    // them; the conditioned correlation stays the two-qubit value.
    const double e = oracle::exact_conditioned_correlation(0.6, 0.5, 1.2, 0.4, 0.4);
    CHECK(e == doctest::Approx(2.0 * 0.6 * 0.8).epsilon(1e-10));
  }

  SUBCASE("vacuum weights follow c") {
    const double c = 1.0;
    const auto mix = chsh::compose_pne(0.6, 0.0, c);
    REQUIRE(mix.components().size() == 4);
    const double denom = (c + 1.0) * (c + 1.0);
    CHECK(mix.components()[0].weight == doctest::Approx(1.0 / denom));
    CHECK(mix.components()[1].weight == doctest::Approx(c / denom));
    CHECK(mix.components()[2].weight == doctest::Approx(c / denom));
    CHECK(mix.components()[3].weight == doctest::Approx(c * c / denom));
  }
}

TEST_CASE("closed-form projection probability") {
  CHECK(chsh::projection_success_probability(0.0) == doctest::Approx(0.25));
  CHECK(chsh::projection_success_probability(0.5) == doctest::Approx(1.0 / 9.0));
  CHECK(chsh::projection_success_probability(1.0) == doctest::Approx(0.0625));
  CHECK_THROWS_AS(chsh::projection_success_probability(-0.1), std::invalid_argument);
}

TEST_CASE("closed-form correlation model") {
  CHECK(chsh::correlation_paper(kInvSqrt2, 0.7, 0.7) == doctest::Approx(1.0));
  CHECK(chsh::correlation_paper(0.0, 0.3, 1.9) == doctest::Approx(0.0));
  CHECK(chsh::correlation_paper(0.6, kPi / 3.0, 0.0) ==
        doctest::Approx(0.4608).epsilon(1e-12));

  SplitMix64 rng(51);
  for (int it = 0; it < 50; ++it) {
    const double alpha = rng.next_double();
    const double a2 = alpha * alpha;
    const double e = chsh::correlation_paper(alpha, rng.next_double() * 7.0,
                                             rng.next_double() * 7.0);
    CHECK(std::abs(e) <= 4.0 * a2 * (1.0 - a2) + 1e-12);
    CHECK(4.0 * a2 * (1.0 - a2) <= 1.0 + 1e-12);
  }
}

TEST_CASE("sampled correlation tracks the exhaustive one") {
  SUBCASE("maximal state at equal settings is perfectly correlated") {
    const auto pne = chsh::PneState::from_alpha(kInvSqrt2, 0.0, 0.0);
    SplitMix64 rng = SplitMix64::stream(61, 0);
    const auto est = chsh::correlation_simulated(pne, 0.4, 0.4, 20000, rng);
    CHECK(est.value == doctest::Approx(1.0));  // opposite patterns have zero mass
    CHECK(est.n14 == 0);
    CHECK(est.n23 == 0);
    CHECK(est.coincidences + 0 <= est.trials);
  }

  SUBCASE("generic points agree within three standard errors") {
    SplitMix64 seeder(62);
    for (int it = 0; it < 8; ++it) {
      const double alpha = seeder.next_double();
      const double c = seeder.next_double();
      const double pl = seeder.next_double() * 2.0 * kPi - kPi;
      const double pr = seeder.next_double() * 2.0 * kPi - kPi;
      const auto pne = chsh::PneState::from_alpha(alpha, 0.3, c);
      SplitMix64 rng = SplitMix64::stream(63, static_cast<std::uint64_t>(it));
      const auto est = chsh::correlation_simulated(pne, pl, pr, 30000, rng);
      const double exact = oracle::exact_conditioned_correlation(alpha, c, 0.3, pl, pr);
      CHECK(std::abs(est.value - exact) < 3.0 * est.stderr_value + 1e-12);
    }
  }

  SUBCASE("single-branch states give uniform coincidences") {
    const auto pne = chsh::PneState::from_alpha(1.0, 0.0, 0.0);
    SplitMix64 rng = SplitMix64::stream(64, 0);
    const auto est = chsh::correlation_simulated(pne, 0.2, -0.4, 20000, rng);
    CHECK(std::abs(est.value) < 3.0 * est.stderr_value);
  }

  SUBCASE("no coincidences raises the no-data error") {
    // Overwhelming vacuum weight: the few trials all land outside the
    // coincidence classes.
    const auto pne = chsh::PneState::from_alpha(0.6, 0.0, 1000.0);
    SplitMix64 rng = SplitMix64::stream(65, 0);
    CHECK_THROWS_AS(chsh::correlation_simulated(pne, 0.1, 0.2, 3, rng),
                    chsh::NoCoincidenceError);
  }
}

TEST_CASE("coincidence fraction matches the enumerated mass, not the closed form") {
  // The dense enumeration puts the one-click-per-side mass at
  // 1/(2 (c+1)^2); the shipped closed form reads 1/(4 (c+1)^2). Both are
  // reported by the tools, and the sampler must match the enumeration.
  for (const double c : {0.0, 0.5, 1.0}) {
    const auto pne = chsh::PneState::from_alpha(kInvSqrt2, 0.0, c);
    SplitMix64 rng = SplitMix64::stream(66, static_cast<std::uint64_t>(c * 2));
    const auto est = chsh::correlation_simulated(pne, 0.0, kPi / 4.0, 100000, rng);
    const double fraction = est.coincidence_fraction();
    const double exact =
        oracle::exact_coincidence_probabilities(kInvSqrt2, c, 0.0, 0.0, kPi / 4.0)
            .coincidence();
    const double se = std::sqrt(exact * (1.0 - exact) / 100000.0);
    CHECK(std::abs(fraction - exact) < 3.0 * se);
    CHECK(exact == doctest::Approx(1.0 / (2.0 * (c + 1) * (c + 1))).epsilon(1e-12));
  }
}

TEST_CASE("closed-form S curve") {
  CHECK(chsh::s_paper(kInvSqrt2) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(chsh::s_paper(0.0) == doctest::Approx(0.0));
  CHECK(chsh::s_paper(1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(chsh::s_paper(0.6) == doctest::Approx(2.6066784381660908).epsilon(1e-12));

  SplitMix64 rng(52);
  for (int it = 0; it < 30; ++it) {
    const double alpha = rng.next_double();
    const double mirrored = std::sqrt(1.0 - alpha * alpha);
    CHECK(chsh::s_paper(alpha) == doctest::Approx(chsh::s_paper(mirrored)).epsilon(1e-12));
  }
}

TEST_CASE("assembled report carries all three S columns") {
  const auto pne = chsh::PneState::from_alpha(0.6, 0.0, 0.0);
  const chsh::ChshSettings settings;
  const auto report = chsh::s_simulated(pne, settings, 20000, 71);

  // Model column: assembled from the four settings, equals the closed form.
  CHECK(report.s_paper == doctest::Approx(chsh::s_paper(0.6)).epsilon(1e-12));
  // Oracle column: 4 sqrt(2) alpha beta with these settings.
  CHECK(report.s_oracle ==
        doctest::Approx(4.0 * std::sqrt(2.0) * 0.6 * 0.8).epsilon(1e-10));
  // Sampled column: statistically consistent with the oracle.
  CHECK(std::abs(report.s_mc - report.s_oracle) <
        3.0 * report.s_mc_ci95 / 1.959963984540054);
  CHECK(report.violation_paper);
}

TEST_CASE("violation window of the closed-form curve") {
  const auto [lo, hi] = chsh::violation_window_paper(1e-10);
  CHECK(std::abs(lo - 0.479) < 1e-3);
  CHECK(std::abs(hi - 0.878) < 1e-3);
  CHECK(chsh::s_paper(lo) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(chsh::s_paper(hi) == doctest::Approx(2.0).epsilon(1e-9));
  // alpha <-> beta symmetry of the curve makes the window self-mirrored.
  CHECK(lo * lo + hi * hi == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(chsh::violation_window_paper(0.0), std::invalid_argument);
}

TEST_CASE("alpha scan is deterministic and covers the grid") {
  const std::vector<double> grid{0.0, kInvSqrt2, 1.0};
  const chsh::ChshSettings settings;
  const auto a = chsh::scan_alpha(grid, settings, 5000, 0.0, 0.0, 1234);
  const auto b = chsh::scan_alpha(grid, settings, 5000, 0.0, 0.0, 1234);
  REQUIRE(a.size() == 3);
  CHECK(a[0].s_paper == doctest::Approx(0.0));
  CHECK(a[1].s_paper == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(a[2].s_paper == doctest::Approx(0.0).epsilon(1e-12));
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].s_mc == b[i].s_mc);
    CHECK(a[i].s_mc_ci95 == b[i].s_mc_ci95);
  }
  CHECK_THROWS_AS(chsh::scan_alpha({}, settings, 100, 0.0, 0.0, 1), std::invalid_argument);
}

TEST_CASE("sampled correlations are calibrated against the oracle") {
  // 100 independent repetitions; the 3-sigma band must hold in at least 99.
  const auto pne = chsh::PneState::from_alpha(0.55, 0.2, 0.3);
  const double exact = oracle::exact_conditioned_correlation(0.55, 0.3, 0.2, 0.3, -0.5);
  int inside = 0;
  for (int rep = 0; rep < 100; ++rep) {
    SplitMix64 rng = SplitMix64::stream(5550, static_cast<std::uint64_t>(rep));
    const auto est = chsh::correlation_simulated(pne, 0.3, -0.5, 10000, rng);
    if (std::abs(est.value - exact) < 3.0 * est.stderr_value) ++inside;
  }
  CHECK(inside >= 99);
}

TEST_CASE("unconditioned variant dilutes by the coincidence fraction") {
  const auto pne = chsh::PneState::from_alpha(0.6, 0.0, 0.4);
  SplitMix64 rng_c = SplitMix64::stream(67, 0);
  SplitMix64 rng_u = SplitMix64::stream(67, 0);
  const auto cond = chsh::correlation_simulated(pne, 0.5, 0.1, 50000, rng_c, true);
  const auto uncond = chsh::correlation_simulated(pne, 0.5, 0.1, 50000, rng_u, false);
  // Same draws, same counts; only the normalization differs.
  CHECK(cond.n13 == uncond.n13);
  CHECK(uncond.value ==
        doctest::Approx(cond.value * cond.coincidence_fraction()).epsilon(1e-12));
  CHECK(uncond.stderr_value < cond.stderr_value + 1e-12);
}

TEST_CASE("state parameters are validated") {
  CHECK_THROWS_AS(chsh::PneState::from_alpha(1.2, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(chsh::PneState::from_alpha(0.5, 0.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(chsh::compose_pne(1.5, 0.0, 0.0), std::invalid_argument);
}
