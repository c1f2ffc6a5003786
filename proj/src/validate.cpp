#include "entsim/validate.hpp"

#include <algorithm>
#include <cmath>

#include "entsim/chsh.hpp"
#include "entsim/optics.hpp"
#include "entsim/oracle.hpp"
#include "entsim/protocol.hpp"
#include "entsim/rng.hpp"

namespace entsim::validate {

namespace {

constexpr double kPi = 3.141592653589793;

using fock::Complex;
using fock::MixedState;
using fock::ModeId;
using fock::StateVector;

// Worst per-amplitude difference between a sparse state and its dense
// counterpart, compared position by position (registers may differ only
// in labels renamed by a PBS).
double max_amplitude_error(const StateVector& sparse, const oracle::DenseState& dense) {
  double worst = 0.0;
  for (std::size_t i = 0; i < dense.amp.size(); ++i) {
    const auto ket = oracle::index_to_ket(dense.reg, i);
    worst = std::max(worst, std::abs(dense.amp[i] - sparse.amplitude(ket)));
  }
  return worst;
}

CheckResult against(const std::string& name, double max_error, double tolerance) {
  return CheckResult{name, max_error, tolerance, max_error <= tolerance};
}

// Generation pipeline, sparse vs dense, over random parameter draws.
// Loss is folded in by evolving each mixture component on both sides.
CheckResult check_generation_circuits(std::uint64_t seed, int draws) {
  double worst_state = 0.0;
  SplitMix64 rng = SplitMix64::stream(seed, 101);
  for (int it = 0; it < draws; ++it) {
    protocol::ProtocolParams params;
    params.theta1 = rng.next_double() * kPi / 4.0;
    params.phi12 = rng.next_double() * 2.0 * kPi;
    params.p_c = 0.01 + rng.next_double() * 0.19;
    params.eta = rng.next_double() * 0.5;
    params.include_double_excitation = rng.next_double() < 0.5;

    StateVector e1 = fock::tensor(
        protocol::emit(params.p_c, protocol::atom_mode_1(), ModeId{"arm1.V"},
                       params.include_double_excitation, params.truncation),
        StateVector::vacuum(fock::ModeRegister({ModeId{"arm1.H"}}, params.truncation)));
    StateVector e2 = fock::tensor(
        protocol::emit(params.p_c, protocol::atom_mode_2(), ModeId{"arm2.V"},
                       params.include_double_excitation, params.truncation),
        StateVector::vacuum(fock::ModeRegister({ModeId{"arm2.H"}}, params.truncation)));
    MixedState mixture =
        protocol::apply_loss(fock::tensor(e1, e2), ModeId{"arm1.V"}, params.eta);
    mixture = protocol::apply_loss(mixture, ModeId{"arm2.V"}, params.eta);

    const optics::Circuit circuit =
        optics::build_generation_circuit(params.theta1, params.phi12);
    for (const auto& comp : mixture.components()) {
      const StateVector sparse = optics::apply_circuit(comp.state, circuit);
      const oracle::DenseState dense =
          oracle::apply_circuit(circuit, oracle::lift(comp.state));
      worst_state = std::max(worst_state, max_amplitude_error(sparse, dense));
    }
  }
  return against("generation circuit amplitudes (sparse vs dense)", worst_state, 1e-10);
}

CheckResult check_measurement_circuits(std::uint64_t seed, int draws) {
  double worst = 0.0;
  SplitMix64 rng = SplitMix64::stream(seed, 202);
  for (int it = 0; it < draws; ++it) {
    const double alpha = rng.next_double();
    const double phi12 = rng.next_double() * 2.0 * kPi;
    const double c = rng.next_double() * 2.0;
    const double phi_l = rng.next_double() * 2.0 * kPi - kPi;
    const double phi_r = rng.next_double() * 2.0 * kPi - kPi;

    const MixedState mixture = chsh::compose_pne(alpha, phi12, c);
    const optics::Circuit meas_l =
        optics::build_measurement_circuit(phi_l, {ModeId{"L1"}, ModeId{"L2"}});
    const optics::Circuit meas_r =
        optics::build_measurement_circuit(phi_r, {ModeId{"R1"}, ModeId{"R2"}});

    for (const auto& comp : mixture.components()) {
      const StateVector sparse =
          optics::apply_circuit(optics::apply_circuit(comp.state, meas_l), meas_r);
      oracle::DenseState dense = oracle::lift(comp.state);
      dense = oracle::apply_circuit(meas_r, oracle::apply_circuit(meas_l, dense));
      worst = std::max(worst, max_amplitude_error(sparse, dense));
    }
  }
  return against("measurement circuit amplitudes (sparse vs dense)", worst, 1e-10);
}

// Exact per-attempt outcome distribution against exhaustive dense
// enumeration of the same pipeline.
CheckResult check_click_distribution(std::uint64_t seed, int draws) {
  double worst = 0.0;
  SplitMix64 rng = SplitMix64::stream(seed, 303);
  for (int it = 0; it < draws; ++it) {
    protocol::ProtocolParams params;
    params.theta1 = rng.next_double() * kPi / 4.0;
    params.phi12 = rng.next_double() * 2.0 * kPi;
    params.p_c = 0.01 + rng.next_double() * 0.19;
    params.eta = rng.next_double() * 0.5;
    params.include_double_excitation = rng.next_double() < 0.5;
    params.c_vacuum = rng.next_double();

    const protocol::AttemptDistribution dist = protocol::attempt_distribution(params);

    StateVector e1 = fock::tensor(
        protocol::emit(params.p_c, protocol::atom_mode_1(), ModeId{"arm1.V"},
                       params.include_double_excitation, params.truncation),
        StateVector::vacuum(fock::ModeRegister({ModeId{"arm1.H"}}, params.truncation)));
    StateVector e2 = fock::tensor(
        protocol::emit(params.p_c, protocol::atom_mode_2(), ModeId{"arm2.V"},
                       params.include_double_excitation, params.truncation),
        StateVector::vacuum(fock::ModeRegister({ModeId{"arm2.H"}}, params.truncation)));
    MixedState mixture =
        protocol::apply_loss(fock::tensor(e1, e2), ModeId{"arm1.V"}, params.eta);
    mixture = protocol::apply_loss(mixture, ModeId{"arm2.V"}, params.eta);

    const optics::Circuit circuit =
        optics::build_generation_circuit(params.theta1, params.phi12);
    const auto detectors = protocol::detector_modes();
    const std::vector<ModeId> detector_list(detectors.begin(), detectors.end());

    double no_click = 0.0, multi = 0.0;
    std::array<double, 4> singles{};
    for (const auto& comp : mixture.components()) {
      const oracle::DenseState dense =
          oracle::apply_circuit(circuit, oracle::lift(comp.state));
      const auto clicks = oracle::exact_click_distribution(dense, detector_list);
      no_click += comp.weight * clicks.no_click;
      multi += comp.weight * clicks.multi;
      for (std::size_t i = 0; i < 4; ++i) singles[i] += comp.weight * clicks.single[i];
    }

    worst = std::max(worst, std::abs(dist.probabilities[0] - no_click));
    for (std::size_t i = 0; i < 4; ++i) {
      worst = std::max(worst, std::abs(dist.probabilities[1 + i] - singles[i]));
    }
    // The sampler folds mass beyond the cutoff into multi-click; undo
    // that before comparing against the dense enumeration.
    worst = std::max(worst,
                     std::abs(dist.probabilities[5] - dist.truncation_loss - multi));
    const double total = dist.probabilities[0] + dist.probabilities[1] +
                         dist.probabilities[2] + dist.probabilities[3] +
                         dist.probabilities[4] + dist.probabilities[5];
    worst = std::max(worst, std::abs(total - 1.0));
  }
  return against("attempt outcome distribution (sparse vs dense)", worst, 1e-10);
}

CheckResult check_element_unitarity(std::uint64_t seed, int draws) {
  double worst = 1.0;  // flips to 0 unless a construction throws
  SplitMix64 rng = SplitMix64::stream(seed, 404);
  try {
    for (int it = 0; it < draws; ++it) {
      fock::ModeRegister pair({ModeId{"a.H"}, ModeId{"a.V"}}, 2);
      // element_operator enforces unitarity at construction.
      oracle::element_operator(
          optics::BeamSplitter{ModeId{"a.H"}, ModeId{"a.V"}, rng.next_double()}, pair);
      oracle::element_operator(
          optics::WavePlate{"a", rng.next_double() * kPi, rng.next_double() * 2.0 * kPi},
          pair);
      oracle::element_operator(
          optics::PhaseShifter{ModeId{"a.H"}, rng.next_double() * 2.0 * kPi}, pair);
    }
    worst = 0.0;
  } catch (const std::logic_error&) {
    worst = 1.0;
  }
  return against("element operator unitarity", worst, 1e-12);
}

}  // namespace

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

ValidationReport run_validation(std::uint64_t seed, int draws) {
  ValidationReport report;
  report.checks.push_back(check_element_unitarity(seed, std::min(draws, 25)));
  report.checks.push_back(check_generation_circuits(seed, draws));
  report.checks.push_back(check_measurement_circuits(seed, draws));
  report.checks.push_back(check_click_distribution(seed, std::max(1, draws / 4)));
  return report;
}

}  // namespace entsim::validate
