// helpers.hpp: shared generators and comparisons for the test suites.

#pragma once

#include <cmath>
#include <complex>

#include "entsim/fock.hpp"
#include "entsim/oracle.hpp"
#include "entsim/rng.hpp"

namespace testutil {

using entsim::SplitMix64;
using entsim::fock::Complex;
using entsim::fock::FockKet;
using entsim::fock::ModeId;
using entsim::fock::ModeRegister;
using entsim::fock::StateVector;

// Dense-supported random state over a small register, unit norm.
inline StateVector random_state(const ModeRegister& reg, SplitMix64& rng,
                                double sparsity = 0.4) {
  StateVector out(reg);
  const std::size_t dim = entsim::oracle::dimension(reg);
  for (std::size_t i = 0; i < dim; ++i) {
    if (rng.next_double() < sparsity) continue;
    out.set_amplitude(entsim::oracle::index_to_ket(reg, i),
                      Complex(rng.next_double() - 0.5, rng.next_double() - 0.5));
  }
  if (out.is_zero()) {
    out.set_amplitude(FockKet(reg.size(), 0), Complex(1.0, 0.0));
  }
  return out.normalized();
}

// Phase-insensitive overlap |<a|b>|; equals norm(a) norm(b) iff the states
// agree up to a global phase.
inline double overlap_magnitude(const StateVector& a, const StateVector& b) {
  return std::abs(entsim::fock::inner(a, b));
}

inline ModeRegister one_mode(int truncation = 2) {
  return ModeRegister({ModeId{"m"}}, truncation);
}

inline ModeRegister two_modes(int truncation = 2) {
  return ModeRegister({ModeId{"a"}, ModeId{"b"}}, truncation);
}

}  // namespace testutil
