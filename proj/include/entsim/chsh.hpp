// chsh.hpp: CHSH test over two entangled-pair links.
//
// Two links (one maximally entangled, one tunable) are post-selected by
// registering only one click per side, which leaves the effective
// two-qubit state alpha |V H> + beta |H V> on the coincidence events.
// Three S columns are reported side by side and never merged:
//   s_paper  - closed form 8 sqrt(2) alpha^2 beta^2, built on the
//              correlation model E = 4 alpha^2 beta^2 cos(phiL - phiR)
//   s_oracle - exact conditioned correlations from dense enumeration
//              (E = 2 alpha beta cos(phiL - phiR) falls out of it)
//   s_mc     - sampled coincidence counts through the same circuits
// The two closed forms agree at the maximal point and differ elsewhere;
// reporting both is part of the contract.

#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "entsim/fock.hpp"
#include "entsim/rng.hpp"

namespace entsim::chsh {

using fock::MixedState;

struct ChshSettings {
  // Analysis phases; defaults are the standard violation settings.
  std::array<double, 3> phi_l{0.0, 1.5707963267948966, 0.7853981633974483};
  std::array<double, 3> phi_r{0.0, -0.7853981633974483, 0.7853981633974483};

  // The four setting pairs entering S, as (l index, r index, sign):
  // S = E(l1,r3) + E(l1,r2) + E(l2,r3) - E(l2,r2).
  static constexpr std::array<std::array<int, 3>, 4> kPairs{
      {{0, 2, +1}, {0, 1, +1}, {1, 2, +1}, {1, 1, -1}}};
};

struct PneState {
  double alpha = 0.7071067811865476;
  double beta = 0.7071067811865476;
  double c_vacuum = 0.0;
  double phi12 = 0.0;

  static PneState from_alpha(double alpha, double phi12, double c_vacuum);
};

struct CorrelationEstimate {
  double value = 0.0;
  long n13 = 0, n24 = 0, n14 = 0, n23 = 0;
  long trials = 0;
  long coincidences = 0;
  double stderr_value = 0.0;
  double phi_l = 0.0;
  double phi_r = 0.0;

  double coincidence_fraction() const;
};

struct SReport {
  double alpha = 0.0;
  double s_paper = 0.0;
  double s_oracle = 0.0;
  double s_mc = 0.0;
  double s_mc_ci95 = 0.0;
  bool violation_paper = false;
  bool violation_mc = false;  // s_mc - ci95 > 2
  std::array<CorrelationEstimate, 4> correlations;
};

class NoCoincidenceError : public std::runtime_error {
 public:
  NoCoincidenceError() : std::runtime_error("no coincidences registered") {}
};

// Full four-mode mixture of the two noisy links over [L1, L2, R1, R2]:
// each link is vacuum with weight c/(c+1), and the phase parameter is
// shared by both links (same channel). The same-side double terms it
// contains carry no coincidence weight.
MixedState compose_pne(double alpha, double phi12, double c_vacuum);

// Closed form 1 / (4 (c+1)^2) for the post-selection success probability.
double projection_success_probability(double c_vacuum);

// Closed-form correlation model, 4 alpha^2 beta^2 cos(phiL - phiR).
double correlation_paper(double alpha, double phi_l, double phi_r);

// Samples joint clicks through the measurement circuits and returns the
// correlation conditioned on one-click-per-side coincidences (stderr =
// sqrt((1 - E^2) / N_coinc)). With conditioned=false the +-1 outcomes are
// averaged over all trials instead, zeros included.
CorrelationEstimate correlation_simulated(const PneState& pne, double phi_l,
                                          double phi_r, long trials, SplitMix64& rng,
                                          bool conditioned = true);

// Closed form 8 sqrt(2) alpha^2 beta^2.
double s_paper(double alpha);

// Assembles S from the closed-form model, the dense oracle, and Monte
// Carlo sampling. Per-setting streams derive as stream(seed, stream_base + k).
SReport s_simulated(const PneState& pne, const ChshSettings& settings, long trials,
                    std::uint64_t seed, std::uint64_t stream_base = 0,
                    bool conditioned = true);

// Roots of s_paper(alpha) = 2 on either side of the maximum, by bisection.
std::pair<double, double> violation_window_paper(double tolerance);

std::vector<SReport> scan_alpha(const std::vector<double>& grid,
                                const ChshSettings& settings, long trials,
                                double c_vacuum, double phi12, std::uint64_t seed,
                                bool conditioned = true);

}  // namespace entsim::chsh
