#include "entsim/optics.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace entsim::optics {

namespace {

using FockKet = fock::FockKet;

constexpr double kFactorial[9] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320};

double binom(int n, int k) { return kFactorial[n] / (kFactorial[k] * kFactorial[n - k]); }

Complex cpow(Complex z, int n) {
  Complex r(1.0, 0.0);
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

// Applies a 2x2 unitary on the creation operators of two register modes.
// Each input ket |n1,n2> expands as
//   (M00 a† + M01 b†)^n1 (M10 a† + M11 b†)^n2 / sqrt(n1! n2!) |0,0>,
// collected per output occupation pair. Output kets past the cutoff are
// dropped with their mass added to leakage (after interference, so the
// dropped mass is exactly what a dense untruncated engine would hold).
StateVector apply_two_mode(const StateVector& in, std::size_t ia, std::size_t ib,
                           const std::array<std::array<Complex, 2>, 2>& m) {
  const auto& reg = in.mode_register();
  const int d = reg.truncation();
  StateVector out(reg);
  out.add_leakage(in.leakage());

  // Coefficients pushed past the cutoff interfere ket by ket exactly like
  // the kept ones, so collect them per output ket before squaring.
  std::map<FockKet, Complex> dropped;

  for (const auto& [ket, amp] : in.amplitudes()) {
    const int n1 = ket[ia];
    const int n2 = ket[ib];
    const int total = n1 + n2;

    std::vector<Complex> coeff_by_p(static_cast<std::size_t>(total) + 1,
                                    Complex(0.0, 0.0));
    for (int j = 0; j <= n1; ++j) {
      for (int k = 0; k <= n2; ++k) {
        coeff_by_p[static_cast<std::size_t>(j + k)] +=
            binom(n1, j) * binom(n2, k) * cpow(m[0][0], j) * cpow(m[0][1], n1 - j) *
            cpow(m[1][0], k) * cpow(m[1][1], n2 - k);
      }
    }

    for (int p = 0; p <= total; ++p) {
      const int q = total - p;
      const Complex coeff =
          amp * coeff_by_p[static_cast<std::size_t>(p)] *
          std::sqrt(kFactorial[p] * kFactorial[q] / (kFactorial[n1] * kFactorial[n2]));
      if (std::abs(coeff) < fock::kAmplitudeEpsilon) continue;
      FockKet next = ket;
      next[ia] = p;
      next[ib] = q;
      if (p > d || q > d) {
        dropped[next] += coeff;
      } else {
        out.accumulate(next, coeff);
      }
    }
  }

  for (const auto& [ket, coeff] : dropped) out.add_leakage(std::norm(coeff));
  return out;
}

StateVector apply_phase(const StateVector& in, std::size_t idx, double phi) {
  StateVector out(in.mode_register());
  out.add_leakage(in.leakage());
  for (const auto& [ket, amp] : in.amplitudes()) {
    out.set_amplitude(ket, amp * std::polar(1.0, phi * ket[idx]));
  }
  return out;
}

}  // namespace

ModeMatrix mode_matrix(const Element& element) {
  ModeMatrix out;
  if (const auto* bs = std::get_if<BeamSplitter>(&element)) {
    const double t = bs->transmissivity;
    if (t < 0.0 || t > 1.0) {
      throw std::invalid_argument("beam splitter transmissivity outside [0, 1]");
    }
    const double tr = std::sqrt(t);
    const double rf = std::sqrt(1.0 - t);
    out.m = {{{Complex(tr, 0.0), Complex(0.0, rf)},
              {Complex(0.0, rf), Complex(tr, 0.0)}}};
  } else if (const auto* wp = std::get_if<WavePlate>(&element)) {
    // R(-theta) diag(1, e^{i gamma}) R(theta) over (H, V)
    const double c = std::cos(wp->theta);
    const double s = std::sin(wp->theta);
    const Complex g = std::polar(1.0, wp->retardance);
    out.m = {{{c * c + g * s * s, c * s * (1.0 - g)},
              {c * s * (1.0 - g), s * s + g * c * c}}};
  } else if (const auto* ps = std::get_if<PhaseShifter>(&element)) {
    out.size = 1;
    out.m[0][0] = std::polar(1.0, ps->phi);
  } else {
    // PBS: occupations pass through untouched, only labels move.
    out.m = {{{Complex(1.0, 0.0), Complex(0.0, 0.0)},
              {Complex(0.0, 0.0), Complex(1.0, 0.0)}}};
  }
  return out;
}

std::vector<ModeId> element_modes(const Element& element) {
  if (const auto* bs = std::get_if<BeamSplitter>(&element)) {
    return {bs->mode_a, bs->mode_b};
  }
  if (const auto* wp = std::get_if<WavePlate>(&element)) {
    return {ModeId{wp->path + ".H"}, ModeId{wp->path + ".V"}};
  }
  if (const auto* ps = std::get_if<PhaseShifter>(&element)) {
    return {ps->mode};
  }
  const auto& pbs = std::get<PolarizingBeamSplitter>(element);
  return {ModeId{pbs.in_path + ".H"}, ModeId{pbs.in_path + ".V"}};
}

StateVector apply_element(const StateVector& state, const Element& element) {
  const auto& reg = state.mode_register();

  if (const auto* ps = std::get_if<PhaseShifter>(&element)) {
    return apply_phase(state, reg.index_of(ps->mode), ps->phi);
  }
  if (const auto* pbs = std::get_if<PolarizingBeamSplitter>(&element)) {
    StateVector out = fock::rename_mode(state, ModeId{pbs->in_path + ".H"},
                                        ModeId{pbs->out_h + ".H"});
    return fock::rename_mode(out, ModeId{pbs->in_path + ".V"},
                             ModeId{pbs->out_v + ".V"});
  }

  const auto modes = element_modes(element);
  const std::size_t ia = reg.index_of(modes[0]);
  const std::size_t ib = reg.index_of(modes[1]);
  if (ia == ib) {
    throw std::invalid_argument("element modes must be distinct");
  }
  return apply_two_mode(state, ia, ib, mode_matrix(element).m);
}

StateVector apply_circuit(const StateVector& state, const Circuit& circuit) {
  StateVector out = state;
  for (const auto& e : circuit.elements) out = apply_element(out, e);
  return out;
}

MixedState apply_circuit(const MixedState& state, const Circuit& circuit) {
  MixedState out;
  for (const auto& c : state.components()) {
    out.add(c.weight, apply_circuit(c.state, circuit));
  }
  return out;
}

std::string Circuit::debug_dump() const {
  std::ostringstream os;
  char buf[128];
  for (const auto& e : elements) {
    if (const auto* bs = std::get_if<BeamSplitter>(&e)) {
      std::snprintf(buf, sizeof(buf), "BS %s %s t=%.9g", bs->mode_a.label.c_str(),
                    bs->mode_b.label.c_str(), bs->transmissivity);
    } else if (const auto* wp = std::get_if<WavePlate>(&e)) {
      std::snprintf(buf, sizeof(buf), "WP %s theta=%.9g ret=%.9g", wp->path.c_str(),
                    wp->theta, wp->retardance);
    } else if (const auto* ps = std::get_if<PhaseShifter>(&e)) {
      std::snprintf(buf, sizeof(buf), "PS %s phi=%.9g", ps->mode.label.c_str(),
                    ps->phi);
    } else {
      const auto& pbs = std::get<PolarizingBeamSplitter>(e);
      std::snprintf(buf, sizeof(buf), "PBS %s -> %s %s", pbs.in_path.c_str(),
                    pbs.out_h.c_str(), pbs.out_v.c_str());
    }
    os << buf << '\n';
  }
  return os.str();
}

Circuit build_generation_circuit(double theta1, double phi12) {
  constexpr double kPi = 3.141592653589793;
  if (theta1 < 0.0 || theta1 > kPi / 4.0 + 1e-12) {
    throw std::invalid_argument("theta1 outside [0, pi/4]");
  }
  Circuit c;
  c.elements = {
      WavePlate{"arm1", 0.0, kQuarterWave},
      WavePlate{"arm1", theta1, kHalfWave},
      WavePlate{"arm2", 0.0, kQuarterWave},
      WavePlate{"arm2", kPi / 4.0 - theta1, kHalfWave},
      PhaseShifter{ModeId{"arm2.H"}, phi12},
      PhaseShifter{ModeId{"arm2.V"}, phi12},
      BeamSplitter{ModeId{"arm1.H"}, ModeId{"arm2.H"}, 0.5},
      BeamSplitter{ModeId{"arm1.V"}, ModeId{"arm2.V"}, 0.5},
      PolarizingBeamSplitter{"arm1", "D1", "D2"},
      PolarizingBeamSplitter{"arm2", "D3", "D4"},
  };
  return c;
}

Circuit build_measurement_circuit(double phi, const std::array<ModeId, 2>& pair) {
  Circuit c;
  c.elements = {
      PhaseShifter{pair[1], phi},
      BeamSplitter{pair[0], pair[1], 0.5},
  };
  return c;
}

}  // namespace entsim::optics
