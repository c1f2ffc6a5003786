// optics.hpp: linear-optics elements and circuits as mode unitaries.
//
// Conventions, fixed project-wide:
//   * beam splitter is symmetric, reflection picks up i:
//       BS(t) = [[sqrt(t), i sqrt(1-t)], [i sqrt(1-t), sqrt(t)]]
//   * wave plate is the standard retarder R(-theta) diag(1, e^{i gamma}) R(theta)
//     acting on the (path.H, path.V) pair
//   * creation operators transform by rows: a_j† -> sum_k M[j][k] a_k†
//   * elements apply left to right in circuit order, no reordering

#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "entsim/fock.hpp"

namespace entsim::optics {

using fock::Complex;
using fock::MixedState;
using fock::ModeId;
using fock::StateVector;

inline constexpr double kQuarterWave = 1.5707963267948966;  // pi/2 retardance
inline constexpr double kHalfWave = 3.141592653589793;      // pi retardance

struct BeamSplitter {
  ModeId mode_a;
  ModeId mode_b;
  double transmissivity = 0.5;
};

struct WavePlate {
  std::string path;       // acts on path.H / path.V
  double theta = 0.0;     // optic-axis inclination, radians
  double retardance = kHalfWave;
};

struct PhaseShifter {
  ModeId mode;
  double phi = 0.0;  // |n> -> e^{i n phi} |n>
};

// Pure mode relabeling: in.H -> out_h.H, in.V -> out_v.V.
struct PolarizingBeamSplitter {
  std::string in_path;
  std::string out_h;
  std::string out_v;
};

using Element =
    std::variant<BeamSplitter, WavePlate, PhaseShifter, PolarizingBeamSplitter>;

struct Circuit {
  std::vector<Element> elements;

  // One element per line, "KIND mode(s) params", deterministic ordering.
  std::string debug_dump() const;
};

// 1x1 or 2x2 complex mode matrix of an element.
struct ModeMatrix {
  std::size_t size = 2;
  std::array<std::array<Complex, 2>, 2> m{};
};

ModeMatrix mode_matrix(const Element& element);

// Modes the element touches, in row order of its matrix.
std::vector<ModeId> element_modes(const Element& element);

StateVector apply_element(const StateVector& state, const Element& element);
StateVector apply_circuit(const StateVector& state, const Circuit& circuit);
MixedState apply_circuit(const MixedState& state, const Circuit& circuit);

// Entanglement-generation setup: per arm a QWP (fixed calibration, axis
// along H) and a HWP, the channel phase on arm 2, the central 50/50 beam
// splitter on each polarization pair, and one PBS per output port. The PBS
// outputs define detector paths D1..D4 (D1/D2 from port 1 H/V, D3/D4 from
// port 2 H/V). Arm wave-plate angles are theta1 and pi/4 - theta1.
Circuit build_generation_circuit(double theta1, double phi12);

// Single-qubit measurement in an equatorial basis: phase phi on the second
// mode of the pair, then a 50/50 beam splitter across the pair. Detectors
// sit on the two outputs (same mode labels, post-splitter).
Circuit build_measurement_circuit(double phi, const std::array<ModeId, 2>& pair);

}  // namespace entsim::optics
