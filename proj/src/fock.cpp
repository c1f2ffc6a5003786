#include "entsim/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

namespace entsim::fock {

namespace {

[[noreturn]] void throw_unknown_mode(const ModeId& mode) {
  throw std::invalid_argument("unknown mode '" + mode.label + "'");
}

}  // namespace

// ------------------------------ ModeRegister ---------------------------

ModeRegister::ModeRegister(std::vector<ModeId> modes, int truncation)
    : modes_(std::move(modes)), truncation_(truncation) {
  if (truncation_ < 1) {
    throw std::invalid_argument("mode register truncation must be >= 1");
  }
  std::set<std::string> seen;
  for (const auto& m : modes_) {
    if (!seen.insert(m.label).second) {
      throw std::invalid_argument("duplicate mode label '" + m.label + "'");
    }
  }
}

std::size_t ModeRegister::index_of(const ModeId& mode) const {
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (modes_[i] == mode) return i;
  }
  throw_unknown_mode(mode);
}

bool ModeRegister::contains(const ModeId& mode) const {
  return std::find(modes_.begin(), modes_.end(), mode) != modes_.end();
}

// ------------------------------ StateVector ----------------------------

StateVector StateVector::vacuum(ModeRegister reg) {
  FockKet vac(reg.size(), 0);
  return single_ket(std::move(reg), std::move(vac));
}

StateVector StateVector::single_ket(ModeRegister reg, FockKet occupations,
                                    Complex amplitude) {
  if (occupations.size() != reg.size()) {
    throw std::invalid_argument("occupation vector length does not match register");
  }
  for (int n : occupations) {
    if (n < 0 || n > reg.truncation()) {
      throw std::invalid_argument("occupation outside [0, d]");
    }
  }
  StateVector out(std::move(reg));
  out.set_amplitude(occupations, amplitude);
  return out;
}

Complex StateVector::amplitude(const FockKet& ket) const {
  auto it = amps_.find(ket);
  return it == amps_.end() ? Complex(0.0, 0.0) : it->second;
}

void StateVector::accumulate(const FockKet& ket, Complex delta) {
  auto [it, inserted] = amps_.try_emplace(ket, delta);
  if (!inserted) it->second += delta;
  if (std::abs(it->second) < kAmplitudeEpsilon) amps_.erase(it);
}

void StateVector::set_amplitude(const FockKet& ket, Complex value) {
  if (std::abs(value) < kAmplitudeEpsilon) {
    amps_.erase(ket);
  } else {
    amps_[ket] = value;
  }
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const auto& [ket, amp] : amps_) s += std::norm(amp);
  return s;
}

double StateVector::norm() const { return std::sqrt(norm_squared()); }

StateVector StateVector::normalized() const {
  const double n = norm();
  if (n <= 0.0) {
    throw std::invalid_argument("cannot normalize a zero state vector");
  }
  StateVector out(reg_);
  for (const auto& [ket, amp] : amps_) out.set_amplitude(ket, amp / n);
  return out;
}

StateVector StateVector::scaled(Complex factor) const {
  StateVector out(reg_);
  out.leakage_ = leakage_ * std::norm(factor);
  for (const auto& [ket, amp] : amps_) out.set_amplitude(ket, amp * factor);
  return out;
}

std::string StateVector::to_debug_string() const {
  std::ostringstream os;
  for (const auto& [ket, amp] : amps_) {  // std::map iterates lexicographically
    for (std::size_t i = 0; i < ket.size(); ++i) {
      if (i > 0) os << ' ';
      os << ket[i];
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), " : %.12g %.12g", amp.real(), amp.imag());
    os << buf << '\n';
  }
  return os.str();
}

// ------------------------------ MixedState -----------------------------

MixedState::MixedState(StateVector pure) { add(1.0, std::move(pure)); }

void MixedState::add(double weight, StateVector state) {
  if (weight < 0.0) {
    throw std::invalid_argument("mixture weight must be non-negative");
  }
  components_.push_back({weight, std::move(state)});
}

double MixedState::total_weight() const {
  double s = 0.0;
  for (const auto& c : components_) s += c.weight;
  return s;
}

MixedState MixedState::normalized() const {
  MixedState out;
  double total = 0.0;
  for (const auto& c : components_) {
    const double mass = c.weight * c.state.norm_squared();
    if (mass > 0.0) total += mass;
  }
  if (total <= 0.0) {
    throw std::invalid_argument("cannot normalize a zero-mass mixture");
  }
  for (const auto& c : components_) {
    const double mass = c.weight * c.state.norm_squared();
    if (mass <= 0.0) continue;
    out.add(mass / total, c.state.normalized());
  }
  return out;
}

// --------------------------- ladder operators --------------------------

StateVector create(const StateVector& state, const ModeId& mode) {
  const auto& reg = state.mode_register();
  const std::size_t idx = reg.index_of(mode);
  const int d = reg.truncation();

  StateVector out(reg);
  out.add_leakage(state.leakage());
  for (const auto& [ket, amp] : state.amplitudes()) {
    const int n = ket[idx];
    const Complex lifted = amp * std::sqrt(static_cast<double>(n + 1));
    if (n + 1 > d) {
      out.add_leakage(std::norm(lifted));
      continue;
    }
    FockKet next = ket;
    next[idx] = n + 1;
    out.accumulate(next, lifted);
  }
  return out;
}

StateVector annihilate(const StateVector& state, const ModeId& mode) {
  const auto& reg = state.mode_register();
  const std::size_t idx = reg.index_of(mode);

  StateVector out(reg);
  out.add_leakage(state.leakage());
  for (const auto& [ket, amp] : state.amplitudes()) {
    const int n = ket[idx];
    if (n == 0) continue;
    FockKet next = ket;
    next[idx] = n - 1;
    out.accumulate(next, amp * std::sqrt(static_cast<double>(n)));
  }
  return out;
}

// --------------------------- composition -------------------------------

StateVector tensor(const StateVector& a, const StateVector& b) {
  const auto& ra = a.mode_register();
  const auto& rb = b.mode_register();
  if (ra.truncation() != rb.truncation()) {
    throw std::invalid_argument("tensor: register truncations differ");
  }
  for (const auto& m : rb.modes()) {
    if (ra.contains(m)) {
      throw std::invalid_argument("tensor: overlapping mode label '" + m.label + "'");
    }
  }
  std::vector<ModeId> modes = ra.modes();
  modes.insert(modes.end(), rb.modes().begin(), rb.modes().end());
  StateVector out(ModeRegister(std::move(modes), ra.truncation()));

  // Mass lost to truncation in either factor contaminates every cross term.
  const double ta = a.norm_squared() + a.leakage();
  const double tb = b.norm_squared() + b.leakage();
  out.add_leakage(ta * tb - a.norm_squared() * b.norm_squared());

  for (const auto& [ka, va] : a.amplitudes()) {
    for (const auto& [kb, vb] : b.amplitudes()) {
      FockKet ket = ka;
      ket.insert(ket.end(), kb.begin(), kb.end());
      out.set_amplitude(ket, va * vb);
    }
  }
  return out;
}

// ---------------------------- measurement ------------------------------

Projection project_occupation(const StateVector& state, const ModeId& mode, int n) {
  const auto& reg = state.mode_register();
  const std::size_t idx = reg.index_of(mode);
  if (n < 0 || n > reg.truncation()) {
    throw std::invalid_argument("projection occupation outside [0, d]");
  }

  StateVector kept(reg);
  double mass = 0.0;
  for (const auto& [ket, amp] : state.amplitudes()) {
    if (ket[idx] != n) continue;
    mass += std::norm(amp);
    kept.set_amplitude(ket, amp);
  }
  if (mass <= 0.0) {
    return {0.0, StateVector(reg)};
  }
  return {mass, kept.normalized()};
}

// ---------------------------- functionals ------------------------------

Complex inner(const StateVector& a, const StateVector& b) {
  if (a.mode_register() != b.mode_register()) {
    throw std::invalid_argument("inner: register mismatch");
  }
  Complex s(0.0, 0.0);
  for (const auto& [ket, amp] : a.amplitudes()) {
    s += std::conj(amp) * b.amplitude(ket);
  }
  return s;
}

double number_expectation(const StateVector& state, const ModeId& mode) {
  const std::size_t idx = state.mode_register().index_of(mode);
  double s = 0.0;
  for (const auto& [ket, amp] : state.amplitudes()) {
    s += static_cast<double>(ket[idx]) * std::norm(amp);
  }
  return s;
}

// ------------------------------ plumbing -------------------------------

StateVector rename_mode(const StateVector& state, const ModeId& from, const ModeId& to) {
  const auto& reg = state.mode_register();
  const std::size_t idx = reg.index_of(from);
  if (from != to && reg.contains(to)) {
    throw std::invalid_argument("rename_mode: label '" + to.label + "' already present");
  }
  std::vector<ModeId> modes = reg.modes();
  modes[idx] = to;
  StateVector out{ModeRegister(std::move(modes), reg.truncation())};
  out.add_leakage(state.leakage());
  for (const auto& [ket, amp] : state.amplitudes()) out.set_amplitude(ket, amp);
  return out;
}

StateVector discard_definite_modes(const StateVector& state,
                                   std::span<const ModeId> modes) {
  const auto& reg = state.mode_register();
  std::vector<bool> drop(reg.size(), false);
  for (const auto& m : modes) drop[reg.index_of(m)] = true;

  if (!state.amplitudes().empty()) {
    const FockKet& first = state.amplitudes().begin()->first;
    for (const auto& [ket, amp] : state.amplitudes()) {
      for (std::size_t i = 0; i < reg.size(); ++i) {
        if (drop[i] && ket[i] != first[i]) {
          throw std::invalid_argument("discard_definite_modes: mode '" +
                                      reg.mode(i).label + "' is not definite");
        }
      }
    }
  }

  std::vector<ModeId> kept_modes;
  for (std::size_t i = 0; i < reg.size(); ++i) {
    if (!drop[i]) kept_modes.push_back(reg.mode(i));
  }
  StateVector out{ModeRegister(std::move(kept_modes), reg.truncation())};
  out.add_leakage(state.leakage());
  for (const auto& [ket, amp] : state.amplitudes()) {
    FockKet reduced;
    reduced.reserve(ket.size());
    for (std::size_t i = 0; i < ket.size(); ++i) {
      if (!drop[i]) reduced.push_back(ket[i]);
    }
    out.set_amplitude(reduced, amp);
  }
  return out;
}

}  // namespace entsim::fock
