// protocol.hpp: heralded entanglement generation between two ensembles.
//
// One attempt: both ensembles emit (excitation + forward photon, success
// amplitude sqrt(p_c)), the photons pass the generation circuit, a lumped
// loss channel acts on each arm, and the exact joint click distribution
// over the four detectors is computed and sampled once. A single click
// heralds the entangled conditional state of the two atomic modes.
//
// Which output port clicked fixes a known extra phase on the second
// ensemble (the splitter convention puts i on reflection); the heralding
// step removes it with a detector-keyed phase shift, so D1 and D3 herald
// the same state, as do D2 and D4.

#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "entsim/fock.hpp"
#include "entsim/optics.hpp"
#include "entsim/rng.hpp"

namespace entsim::protocol {

using fock::MixedState;
using fock::ModeId;
using fock::StateVector;

struct ProtocolParams {
  double p_c = 0.01;      // excitation probability per attempt, [0, 1)
  double eta = 0.0;       // lumped loss probability per arm, [0, 1)
  double c_vacuum = 0.0;  // vacuum coefficient of the heralded state, >= 0
  double t0 = 1.0;        // light-atom interaction time per attempt, > 0
  double theta1 = 0.39269908169872414;  // pi/8: alpha = beta = 1/sqrt(2)
  double phi12 = 0.0;     // channel phase between the arms
  bool include_double_excitation = false;
  int truncation = 2;     // per-mode occupation cutoff d

  double alpha() const;  // sin(2 theta1)
  double beta() const;   // cos(2 theta1)

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

enum class AttemptOutcome { NoClick = 0, D1 = 1, D2 = 2, D3 = 3, D4 = 4, MultiClick = 5 };

inline constexpr std::size_t kOutcomeCount = 6;

const std::string& to_string(AttemptOutcome outcome);
bool is_single_click(AttemptOutcome outcome);

// Emission of one ensemble, Fock form over [atom_mode, stokes_mode]:
//   |00> + sqrt(p_c) |11>  (+ sqrt(2) p_c |22> when include_double),
// normalized.
StateVector emit(double p_c, const ModeId& atom_mode, const ModeId& stokes_mode,
                 bool include_double, int truncation = 2);

// Beam-splitter loss model: couples the mode to a fresh environment mode
// with transmissivity 1 - eta, projects the environment over all
// occupations and discards it. Total probability is preserved.
MixedState apply_loss(const StateVector& state, const ModeId& mode, double eta);
MixedState apply_loss(const MixedState& state, const ModeId& mode, double eta);

// Exact per-attempt statistics: outcome probabilities in the order
// NoClick, D1..D4, MultiClick, and the heralded atomic state (over
// [E1.atom, E2.atom]) conditioned on each outcome. Mass pushed past the
// occupation cutoff is reported in truncation_loss and counted toward
// MultiClick when sampling (three or more photons in one mode).
struct AttemptDistribution {
  std::array<double, kOutcomeCount> probabilities{};
  std::array<MixedState, kOutcomeCount> conditional;
  double truncation_loss = 0.0;

  double single_click_probability() const;
};

AttemptDistribution attempt_distribution(const ProtocolParams& params);

// Draws one outcome from the exact distribution. Never rejection-samples
// photon paths; consumes exactly one uniform draw.
std::pair<AttemptOutcome, MixedState> attempt(const ProtocolParams& params,
                                              SplitMix64& rng);

// Closed-form heralded state: vacuum with weight c/(c+1) plus the pure
// conditional state for the given detector. Only single-click outcomes
// have one; anything else throws.
MixedState conditional_state(const ProtocolParams& params, AttemptOutcome outcome);

struct GenerationResult {
  AttemptOutcome outcome = AttemptOutcome::NoClick;
  MixedState state;
  long attempts = 0;
  double elapsed = 0.0;  // attempts * t0
};

class ExhaustionError : public std::runtime_error {
 public:
  explicit ExhaustionError(long attempts)
      : std::runtime_error("no heralding click within " + std::to_string(attempts) +
                           " attempts"),
        attempts_(attempts) {}
  long attempts() const { return attempts_; }

 private:
  long attempts_;
};

// Repeats attempts until a single detector clicks; throws ExhaustionError
// past max_attempts. One uniform draw per attempt.
GenerationResult run_until_success(const ProtocolParams& params, SplitMix64& rng,
                                   long max_attempts);

// The closed-form time estimate t0 / ((1 - eta) p_c).
double expected_generation_time(const ProtocolParams& params);

// Mode labels used by the generation pipeline.
ModeId atom_mode_1();
ModeId atom_mode_2();
std::array<ModeId, 4> detector_modes();

}  // namespace entsim::protocol
