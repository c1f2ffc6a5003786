// fock.hpp: sparse truncated Fock states over a register of labeled bosonic modes.
//
// States are value types: every operation returns a new state, nothing is
// mutated in place once a value is shared. Probability mass discarded by
// the occupation cutoff is accumulated in `leakage` rather than dropped
// silently, so truncation artifacts stay observable.

#pragma once

#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace entsim::fock {

using Complex = std::complex<double>;

// Amplitudes below this magnitude are pruned from the sparse map.
inline constexpr double kAmplitudeEpsilon = 1e-14;

// Hierarchical mode label, e.g. "E1.atom", "arm1.H". Comparison is exact
// string equality.
struct ModeId {
  std::string label;

  friend bool operator==(const ModeId&, const ModeId&) = default;
  friend auto operator<=>(const ModeId&, const ModeId&) = default;
};

// Occupation numbers, one entry per register mode, in register order.
using FockKet = std::vector<int>;

// Ordered mode list plus the per-mode occupation cutoff d (max occupation).
class ModeRegister {
 public:
  ModeRegister(std::vector<ModeId> modes, int truncation);

  std::size_t size() const { return modes_.size(); }
  int truncation() const { return truncation_; }
  const std::vector<ModeId>& modes() const { return modes_; }
  const ModeId& mode(std::size_t i) const { return modes_.at(i); }

  // Throws std::invalid_argument naming the label if absent.
  std::size_t index_of(const ModeId& mode) const;
  bool contains(const ModeId& mode) const;

  friend bool operator==(const ModeRegister&, const ModeRegister&) = default;

 private:
  std::vector<ModeId> modes_;
  int truncation_ = 1;
};

// Sparse complex superposition over Fock kets of one register.
class StateVector {
 public:
  explicit StateVector(ModeRegister reg) : reg_(std::move(reg)) {}

  static StateVector vacuum(ModeRegister reg);
  // Single basis ket; validates 0 <= n <= d per mode.
  static StateVector single_ket(ModeRegister reg, FockKet occupations,
                                Complex amplitude = Complex(1.0, 0.0));

  const ModeRegister& mode_register() const { return reg_; }
  const std::map<FockKet, Complex>& amplitudes() const { return amps_; }

  Complex amplitude(const FockKet& ket) const;
  // Adds onto an existing entry; prunes results below kAmplitudeEpsilon.
  void accumulate(const FockKet& ket, Complex delta);
  void set_amplitude(const FockKet& ket, Complex value);

  double leakage() const { return leakage_; }
  void add_leakage(double mass) { leakage_ += mass; }

  double norm_squared() const;
  double norm() const;
  bool is_zero() const { return amps_.empty(); }

  // Unit-norm copy; leakage resets to zero (the result is declared a fresh
  // normalized state). Throws on a zero vector.
  StateVector normalized() const;

  StateVector scaled(Complex factor) const;

  // One line per ket, "n1 n2 ... : re im", sorted lexicographically by
  // occupation vector.
  std::string to_debug_string() const;

 private:
  ModeRegister reg_;
  std::map<FockKet, Complex> amps_;
  double leakage_ = 0.0;
};

// Weighted ensemble of state vectors.
class MixedState {
 public:
  struct Component {
    double weight = 0.0;
    StateVector state;
  };

  MixedState() = default;
  explicit MixedState(StateVector pure);  // single component, weight 1

  void add(double weight, StateVector state);
  const std::vector<Component>& components() const { return components_; }
  bool empty() const { return components_.empty(); }
  double total_weight() const;

  // Normalizes each component to unit norm (folding norm^2 into its
  // weight) and rescales weights to sum to one. Drops zero-mass entries.
  MixedState normalized() const;

 private:
  std::vector<Component> components_;
};

// --------------------------- ladder operators --------------------------

// a† action: |n> -> sqrt(n+1) |n+1>. Kets pushed past the cutoff are
// dropped with their probability mass added to leakage. The result is
// generally unnormalized.
StateVector create(const StateVector& state, const ModeId& mode);

// a action: |n> -> sqrt(n) |n-1>; |0> terms vanish (no leakage, that is
// genuine operator action, not truncation).
StateVector annihilate(const StateVector& state, const ModeId& mode);

// --------------------------- composition -------------------------------

// Tensor product. Registers concatenate; mode labels must be disjoint and
// truncations equal.
StateVector tensor(const StateVector& a, const StateVector& b);

// ---------------------------- measurement ------------------------------

struct Projection {
  double probability = 0.0;
  StateVector post;
};

// Projects onto occupation n of one mode. probability is the raw
// |amplitude|^2 mass (no renormalization by the input norm); the post
// state is renormalized, or the zero vector when the mass vanishes.
Projection project_occupation(const StateVector& state, const ModeId& mode, int n);

// ---------------------------- functionals ------------------------------

// <a|b>; registers must match exactly.
Complex inner(const StateVector& a, const StateVector& b);

// <state| n_mode |state> (raw, no renormalization).
double number_expectation(const StateVector& state, const ModeId& mode);

// ------------------------------ plumbing -------------------------------

// Relabels a mode in place (same position, same occupations). The new
// label must not collide with an existing one.
StateVector rename_mode(const StateVector& state, const ModeId& from, const ModeId& to);

// Removes modes whose occupation is identical across every ket (as after
// project_occupation); throws if any listed mode is still indefinite.
StateVector discard_definite_modes(const StateVector& state,
                                   std::span<const ModeId> modes);

}  // namespace entsim::fock
