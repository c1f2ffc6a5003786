#include "entsim/protocol.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace entsim::protocol {

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kTinyMass = 1e-24;  // pattern masses below this are noise

using fock::FockKet;
using fock::ModeRegister;

void check_range(bool ok, const char* field, const char* requirement) {
  if (!ok) {
    throw std::invalid_argument(std::string(field) + " " + requirement);
  }
}

}  // namespace

double ProtocolParams::alpha() const { return std::sin(2.0 * theta1); }
double ProtocolParams::beta() const { return std::cos(2.0 * theta1); }

void ProtocolParams::validate() const {
  check_range(p_c >= 0.0 && p_c < 1.0, "p_c", "must lie in [0, 1)");
  check_range(eta >= 0.0 && eta < 1.0, "eta", "must lie in [0, 1)");
  check_range(c_vacuum >= 0.0, "c_vacuum", "must be >= 0");
  check_range(t0 > 0.0, "t0", "must be > 0");
  check_range(theta1 >= 0.0 && theta1 <= kPi / 4.0 + 1e-12, "theta1",
              "must lie in [0, pi/4]");
  check_range(truncation >= 1, "truncation", "must be >= 1");
}

const std::string& to_string(AttemptOutcome outcome) {
  static const std::string names[kOutcomeCount] = {"NoClick", "D1", "D2",
                                                   "D3", "D4", "MultiClick"};
  return names[static_cast<std::size_t>(outcome)];
}

bool is_single_click(AttemptOutcome outcome) {
  return outcome >= AttemptOutcome::D1 && outcome <= AttemptOutcome::D4;
}

ModeId atom_mode_1() { return ModeId{"E1.atom"}; }
ModeId atom_mode_2() { return ModeId{"E2.atom"}; }

std::array<ModeId, 4> detector_modes() {
  return {ModeId{"D1.H"}, ModeId{"D2.V"}, ModeId{"D3.H"}, ModeId{"D4.V"}};
}

StateVector emit(double p_c, const ModeId& atom_mode, const ModeId& stokes_mode,
                 bool include_double, int truncation) {
  check_range(p_c >= 0.0 && p_c < 1.0, "p_c", "must lie in [0, 1)");
  ModeRegister reg({atom_mode, stokes_mode}, truncation);
  StateVector out(reg);
  out.set_amplitude(FockKet{0, 0}, 1.0);
  out.set_amplitude(FockKet{1, 1}, std::sqrt(p_c));
  if (include_double && truncation >= 2) {
    // Second-order term (p_c / sqrt(2)) (s† a†)^2 |vac>.
    out.set_amplitude(FockKet{2, 2}, std::sqrt(2.0) * p_c);
  }
  return out.normalized();
}

MixedState apply_loss(const StateVector& state, const ModeId& mode, double eta) {
  check_range(eta >= 0.0 && eta < 1.0, "eta", "must lie in [0, 1)");
  if (eta == 0.0) {
    return MixedState(state);
  }
  const ModeId env{mode.label + ".env"};
  StateVector extended =
      fock::tensor(state, StateVector::vacuum(
                              ModeRegister({env}, state.mode_register().truncation())));
  extended = optics::apply_element(
      extended, optics::BeamSplitter{mode, env, 1.0 - eta});

  MixedState out;
  const std::array<ModeId, 1> discard{env};
  for (int n = 0; n <= state.mode_register().truncation(); ++n) {
    auto proj = fock::project_occupation(extended, env, n);
    if (proj.probability <= 0.0) continue;
    out.add(proj.probability, fock::discard_definite_modes(proj.post, discard));
  }
  return out;
}

MixedState apply_loss(const MixedState& state, const ModeId& mode, double eta) {
  MixedState out;
  for (const auto& c : state.components()) {
    const MixedState lossy = apply_loss(c.state, mode, eta);
    for (const auto& piece : lossy.components()) {
      out.add(c.weight * piece.weight, piece.state);
    }
  }
  return out;
}

namespace {

// Heralding phase correction: the splitter convention leaves a relative
// phase +i (ports 1: D1/D2) or -i (ports 2: D3/D4) on the second
// ensemble's term; remove it so the heralded state carries e^{i phi12}
// alone.
StateVector feed_forward(const StateVector& state, AttemptOutcome outcome) {
  const double correction =
      (outcome == AttemptOutcome::D1 || outcome == AttemptOutcome::D2) ? -kPi / 2.0
                                                                       : kPi / 2.0;
  return optics::apply_element(state, optics::PhaseShifter{atom_mode_2(), correction});
}

}  // namespace

AttemptDistribution attempt_distribution(const ProtocolParams& params) {
  params.validate();
  const int d = params.truncation;

  // Emission into the V polarization of each arm (the calibration plate
  // upstream fixes the linear polarization); H starts in vacuum.
  StateVector e1 = fock::tensor(
      emit(params.p_c, atom_mode_1(), ModeId{"arm1.V"}, params.include_double_excitation, d),
      StateVector::vacuum(ModeRegister({ModeId{"arm1.H"}}, d)));
  StateVector e2 = fock::tensor(
      emit(params.p_c, atom_mode_2(), ModeId{"arm2.V"}, params.include_double_excitation, d),
      StateVector::vacuum(ModeRegister({ModeId{"arm2.H"}}, d)));
  StateVector joint = fock::tensor(e1, e2);

  // Lumped loss per arm. It acts before the wave plates where only the V
  // mode is occupied; a polarization-blind channel commutes with the
  // plates, so this placement is exact.
  MixedState mixture = apply_loss(joint, ModeId{"arm1.V"}, params.eta);
  mixture = apply_loss(mixture, ModeId{"arm2.V"}, params.eta);

  const optics::Circuit circuit =
      optics::build_generation_circuit(params.theta1, params.phi12);
  mixture = optics::apply_circuit(mixture, circuit);

  const auto detectors = detector_modes();
  const std::array<ModeId, 2> atoms{atom_mode_1(), atom_mode_2()};

  AttemptDistribution dist;
  std::array<MixedState, kOutcomeCount> raw;

  for (const auto& comp : mixture.components()) {
    const auto& reg = comp.state.mode_register();
    std::array<std::size_t, 4> dpos{};
    for (std::size_t i = 0; i < 4; ++i) dpos[i] = reg.index_of(detectors[i]);

    // Group kets of this component by detector occupation pattern.
    std::map<std::array<int, 4>, StateVector> by_pattern;
    for (const auto& [ket, amp] : comp.state.amplitudes()) {
      std::array<int, 4> pattern{ket[dpos[0]], ket[dpos[1]], ket[dpos[2]],
                                 ket[dpos[3]]};
      auto [it, inserted] = by_pattern.try_emplace(pattern, StateVector(reg));
      it->second.set_amplitude(ket, amp);
    }

    for (auto& [pattern, piece] : by_pattern) {
      const double mass = comp.weight * piece.norm_squared();
      if (mass < kTinyMass) continue;

      int clicking = 0;
      std::size_t which = 0;
      for (std::size_t i = 0; i < 4; ++i) {
        if (pattern[i] >= 1) {
          ++clicking;
          which = i;
        }
      }
      std::size_t outcome_index = 0;
      if (clicking == 1) {
        outcome_index = 1 + which;
      } else if (clicking >= 2) {
        outcome_index = static_cast<std::size_t>(AttemptOutcome::MultiClick);
      }

      dist.probabilities[outcome_index] += mass;
      StateVector atoms_only =
          fock::discard_definite_modes(piece.normalized(), std::span(detectors));
      raw[outcome_index].add(mass, std::move(atoms_only));
    }
  }

  double accounted = 0.0;
  for (double p : dist.probabilities) accounted += p;
  dist.truncation_loss = std::max(0.0, 1.0 - accounted);
  // Mass beyond the cutoff means three or more photons piled somewhere;
  // count it as a multi-click when sampling.
  dist.probabilities[static_cast<std::size_t>(AttemptOutcome::MultiClick)] +=
      dist.truncation_loss;

  for (std::size_t i = 0; i < kOutcomeCount; ++i) {
    if (raw[i].empty()) continue;
    MixedState normalized = raw[i].normalized();
    const auto outcome = static_cast<AttemptOutcome>(i);
    if (!is_single_click(outcome)) {
      dist.conditional[i] = std::move(normalized);
      continue;
    }
    MixedState corrected;
    for (const auto& c : normalized.components()) {
      corrected.add(c.weight, feed_forward(c.state, outcome));
    }
    // Vacuum admixture of the heralded state (mode-mismatch noise),
    // weight c/(c+1); it does not alter the click statistics.
    const double c = params.c_vacuum;
    MixedState final_state;
    if (c > 0.0) {
      final_state.add(c / (c + 1.0),
                      StateVector::vacuum(ModeRegister({atoms[0], atoms[1]}, d)));
    }
    for (const auto& comp : corrected.components()) {
      final_state.add(comp.weight / (c + 1.0), comp.state);
    }
    dist.conditional[i] = std::move(final_state);
  }
  return dist;
}

double AttemptDistribution::single_click_probability() const {
  double s = 0.0;
  for (std::size_t i = 1; i <= 4; ++i) s += probabilities[i];
  return s;
}

namespace {

std::pair<AttemptOutcome, MixedState> draw_outcome(const AttemptDistribution& dist,
                                                   SplitMix64& rng) {
  const std::size_t idx = rng.sample_index(
      std::span<const double>(dist.probabilities.data(), dist.probabilities.size()),
      1.0);
  const auto outcome = static_cast<AttemptOutcome>(idx);
  return {outcome, dist.conditional[idx]};
}

}  // namespace

std::pair<AttemptOutcome, MixedState> attempt(const ProtocolParams& params,
                                              SplitMix64& rng) {
  return draw_outcome(attempt_distribution(params), rng);
}

MixedState conditional_state(const ProtocolParams& params, AttemptOutcome outcome) {
  params.validate();
  if (!is_single_click(outcome)) {
    throw std::invalid_argument("no conditional state for outcome " +
                                to_string(outcome));
  }
  const bool direct = outcome == AttemptOutcome::D1 || outcome == AttemptOutcome::D3;
  const double a = direct ? params.alpha() : params.beta();
  const double b = direct ? params.beta() : params.alpha();

  ModeRegister reg({atom_mode_1(), atom_mode_2()}, params.truncation);
  StateVector pure(reg);
  pure.set_amplitude(FockKet{1, 0}, a);
  pure.set_amplitude(FockKet{0, 1}, std::polar(1.0, params.phi12) * b);

  const double c = params.c_vacuum;
  MixedState out;
  if (c > 0.0) out.add(c / (c + 1.0), StateVector::vacuum(reg));
  out.add(1.0 / (c + 1.0), pure.normalized());
  return out;
}

GenerationResult run_until_success(const ProtocolParams& params, SplitMix64& rng,
                                   long max_attempts) {
  if (max_attempts < 1) {
    throw std::invalid_argument("max_attempts must be >= 1");
  }
  const AttemptDistribution dist = attempt_distribution(params);
  for (long n = 1; n <= max_attempts; ++n) {
    auto [outcome, state] = draw_outcome(dist, rng);
    if (is_single_click(outcome)) {
      return GenerationResult{outcome, std::move(state), n,
                              static_cast<double>(n) * params.t0};
    }
  }
  throw ExhaustionError(max_attempts);
}

double expected_generation_time(const ProtocolParams& params) {
  params.validate();
  if (params.p_c <= 0.0) {
    throw std::invalid_argument("p_c must be > 0 for a generation-time estimate");
  }
  return params.t0 / ((1.0 - params.eta) * params.p_c);
}

}  // namespace entsim::protocol
