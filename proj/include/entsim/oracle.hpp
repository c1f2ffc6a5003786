// oracle.hpp: dense brute-force reference engine for small registers.
//
// Everything here trades speed for directness: full vectors over the
// (d+1)^modes basis, operators built column by column from the definition
// of the element action, exhaustive enumeration for click statistics.
// Used to validate the sparse engine and every sampled result.

#pragma once

#include <cstddef>
#include <vector>

#include "entsim/fock.hpp"
#include "entsim/optics.hpp"

namespace entsim::oracle {

using fock::Complex;
using fock::FockKet;
using fock::MixedState;
using fock::ModeId;
using fock::ModeRegister;
using fock::StateVector;

// Dense registers are capped at (d+1)^modes <= 729 (6 modes at d = 2).
inline constexpr std::size_t kMaxDimension = 729;

struct DenseState {
  ModeRegister reg;
  std::vector<Complex> amp;  // index = sum_i n_i (d+1)^i, mode 0 least significant

  double norm_squared() const;
};

// Row-major dim x dim matrix over the same basis.
struct DenseOperator {
  std::size_t dim = 0;
  std::vector<Complex> mat;

  Complex& at(std::size_t r, std::size_t c) { return mat[r * dim + c]; }
  const Complex& at(std::size_t r, std::size_t c) const { return mat[r * dim + c]; }
};

std::size_t dimension(const ModeRegister& reg);
std::size_t ket_to_index(const ModeRegister& reg, const FockKet& ket);
FockKet index_to_ket(const ModeRegister& reg, std::size_t index);

// Lossless round trip with the sparse engine; throws past the size guard.
DenseState lift(const StateVector& state);
StateVector lower(const DenseState& dense);

// Dense unitary of one element on a register. Unitarity is enforced at
// construction: exactly for small dimensions, by probe vectors for large
// ones; a violation is a hard logic failure, not a recoverable error.
DenseOperator element_operator(const optics::Element& element, const ModeRegister& reg);

DenseState apply(const DenseOperator& op, const DenseState& state);

// Applies a circuit element by element (PBS renames the register in
// place, occupations untouched).
DenseState apply_circuit(const optics::Circuit& circuit, DenseState state);

DenseOperator multiply(const DenseOperator& a, const DenseOperator& b);

// ----------------------- click statistics ------------------------------

struct ClickDistribution {
  double no_click = 0.0;
  std::vector<double> single;  // one entry per detector mode
  double multi = 0.0;

  double total() const;
};

// Exhaustive enumeration over occupation patterns of the detector modes.
// A detector clicks on any occupation >= 1 (non-number-resolving); two or
// more distinct clicking detectors count as multi.
ClickDistribution exact_click_distribution(const DenseState& state,
                                           const std::vector<ModeId>& detector_modes);

// ----------------------- density-matrix utilities ----------------------

struct DensityMatrix {
  ModeRegister reg;
  std::size_t dim = 0;
  std::vector<Complex> rho;  // row-major
};

DensityMatrix density_matrix(const MixedState& state);

// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 via a complex
// Jacobi eigensolver.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// <psi|rho|psi> for a normalized pure reference.
double pure_fidelity(const StateVector& psi, const MixedState& rho);

double max_abs_difference(const DensityMatrix& a, const DensityMatrix& b);

// Bosonic pure-loss channel on one mode, Kraus form
//   K_k |n> = sqrt(C(n,k) (1-eta)^{n-k} eta^k) |n-k>,
// applied to a density matrix. Reference for the sparse loss model.
DensityMatrix apply_loss_dense(const DensityMatrix& rho, const ModeId& mode, double eta);

// ----------------------- CHSH reference route --------------------------

// Exact coincidence statistics for two noisy links (a maximally entangled
// one on L1/R1, a tunable one on L2/R2, both with vacuum weight
// c/(c+1)) measured in equatorial bases phiL and phiR. Built densely and
// independently of the chsh module.
struct CoincidenceProbabilities {
  double p13 = 0.0, p24 = 0.0, p14 = 0.0, p23 = 0.0;

  double coincidence() const { return p13 + p24 + p14 + p23; }
};

CoincidenceProbabilities exact_coincidence_probabilities(double alpha, double c_vacuum,
                                                         double phi12, double phi_l,
                                                         double phi_r);

// Conditioned correlation (p13 + p24 - p14 - p23) / coincidence mass;
// throws when the coincidence mass vanishes.
double exact_conditioned_correlation(double alpha, double c_vacuum, double phi12,
                                     double phi_l, double phi_r);

}  // namespace entsim::oracle
