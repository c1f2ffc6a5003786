#include "entsim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace entsim::oracle {

namespace {

constexpr double kUnitarityTol = 1e-12;

double fact(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

double binom(int n, int k) { return fact(n) / (fact(k) * fact(n - k)); }

Complex ipow(Complex z, int n) {
  Complex r(1.0, 0.0);
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

// Unitarity enforcement for a constructed element operator. A two-mode
// mixer conserves the photon total N of its mode pair, so the truncated
// operator is exactly unitary on the kets with N <= d and can only lose
// mass on kets with N > d. `active` holds the pair positions (empty for
// operators that are unitary on the whole truncated space).
void enforce_unitary(const DenseOperator& op, const ModeRegister& reg,
                     const std::vector<std::size_t>& active) {
  const std::size_t n = op.dim;
  const int d = reg.truncation();

  auto pair_total = [&](std::size_t index) {
    if (active.empty()) return 0;  // always within the safe subspace
    const FockKet ket = index_to_ket(reg, index);
    int total = 0;
    for (std::size_t pos : active) total += ket[pos];
    return total;
  };

  if (n <= 128) {
    for (std::size_t i = 0; i < n; ++i) {
      const bool safe_i = pair_total(i) <= d;
      for (std::size_t j = i; j < n; ++j) {
        const bool safe_j = pair_total(j) <= d;
        if (!safe_i && i != j) continue;
        if (i == j || (safe_i && safe_j)) {
          Complex s(0.0, 0.0);
          for (std::size_t k = 0; k < n; ++k) {
            s += std::conj(op.at(k, i)) * op.at(k, j);  // (U† U)_{ij}
          }
          if (i == j && !safe_i) {
            if (s.real() > 1.0 + kUnitarityTol) {
              throw std::logic_error("dense element operator creates probability");
            }
            continue;
          }
          const Complex expect = (i == j) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
          if (std::abs(s - expect) > kUnitarityTol) {
            throw std::logic_error("dense element operator is not unitary");
          }
        }
      }
    }
    return;
  }

  // Large register: probe vectors restricted to the safe subspace.
  std::vector<Complex> v(n, Complex(0.0, 0.0)), w(n, Complex(0.0, 0.0));
  std::vector<Complex> uv(n), uw(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (pair_total(i) > d) continue;
    v[i] = Complex(std::cos(0.7 * static_cast<double>(i) + 0.3),
                   std::sin(1.3 * static_cast<double>(i)));
    w[i] = Complex(std::sin(0.4 * static_cast<double>(i) + 1.1),
                   std::cos(2.1 * static_cast<double>(i)));
  }
  auto matvec = [&](const std::vector<Complex>& x, std::vector<Complex>& out) {
    for (std::size_t r = 0; r < n; ++r) {
      Complex s(0.0, 0.0);
      for (std::size_t c = 0; c < n; ++c) s += op.at(r, c) * x[c];
      out[r] = s;
    }
  };
  auto dot = [&](const std::vector<Complex>& a, const std::vector<Complex>& b) {
    Complex s(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) s += std::conj(a[i]) * b[i];
    return s;
  };
  matvec(v, uv);
  matvec(w, uw);
  const double scale = std::sqrt(std::abs(dot(v, v)) * std::abs(dot(w, w)));
  if (std::abs(dot(uv, uv) - dot(v, v)) > kUnitarityTol * std::abs(dot(v, v)) ||
      std::abs(dot(uw, uw) - dot(w, w)) > kUnitarityTol * std::abs(dot(w, w)) ||
      std::abs(dot(uv, uw) - dot(v, w)) > kUnitarityTol * scale) {
    throw std::logic_error("dense element operator fails unitarity probes");
  }
}

// Dense image of one basis ket under a two-mode creation-operator
// substitution a† -> m00 a† + m01 b†, b† -> m10 a† + m11 b†. Standalone:
// shares no code with the sparse engine it checks. Images past the
// cutoff are dropped (their mass is the leakage the sparse engine
// accounts).
template <typename Sink>
void expand_two_mode(const ModeRegister& reg, std::size_t col, std::size_t ia,
                     std::size_t ib, const std::array<std::array<Complex, 2>, 2>& m,
                     Sink&& sink) {
  const FockKet ket = index_to_ket(reg, col);
  const int n1 = ket[ia];
  const int n2 = ket[ib];
  const int d = reg.truncation();
  for (int j = 0; j <= n1; ++j) {
    for (int k = 0; k <= n2; ++k) {
      const int p = j + k;
      const int q = n1 + n2 - p;
      if (p > d || q > d) continue;
      const Complex coeff = binom(n1, j) * binom(n2, k) * ipow(m[0][0], j) *
                            ipow(m[0][1], n1 - j) * ipow(m[1][0], k) *
                            ipow(m[1][1], n2 - k) *
                            std::sqrt(fact(p) * fact(q) / (fact(n1) * fact(n2)));
      FockKet image = ket;
      image[ia] = p;
      image[ib] = q;
      sink(ket_to_index(reg, image), coeff);
    }
  }
}

// ----------------------- Jacobi eigensolver ----------------------------

// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
// rotations. a is destroyed; v receives the eigenvectors (columns).
void jacobi_hermitian(std::vector<Complex>& a, std::size_t n,
                      std::vector<double>& eigenvalues, std::vector<Complex>& v) {
  v.assign(n * n, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = Complex(1.0, 0.0);

  auto A = [&](std::size_t r, std::size_t c) -> Complex& { return a[r * n + c]; };
  auto V = [&](std::size_t r, std::size_t c) -> Complex& { return v[r * n + c]; };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(A(p, q));
    }
    if (off < 1e-30) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = A(p, q);
        const double b = std::abs(apq);
        if (b < 1e-18) continue;
        const Complex phase = apq / b;
        const double app = A(p, p).real();
        const double aqq = A(q, q).real();
        const double theta = 0.5 * std::atan2(2.0 * b, app - aqq);
        const double c = std::cos(theta);
        const double s = std::sin(theta);

        // Columns p and q of A and V rotate by
        //   [c, -s e^{i phi}; s e^{-i phi}, c]
        for (std::size_t r = 0; r < n; ++r) {
          const Complex arp = A(r, p);
          const Complex arq = A(r, q);
          A(r, p) = c * arp + s * std::conj(phase) * arq;
          A(r, q) = -s * phase * arp + c * arq;
          const Complex vrp = V(r, p);
          const Complex vrq = V(r, q);
          V(r, p) = c * vrp + s * std::conj(phase) * vrq;
          V(r, q) = -s * phase * vrp + c * vrq;
        }
        // Rows p and q by the conjugate transpose.
        for (std::size_t cidx = 0; cidx < n; ++cidx) {
          const Complex apc = A(p, cidx);
          const Complex aqc = A(q, cidx);
          A(p, cidx) = c * apc + s * phase * aqc;
          A(q, cidx) = -s * std::conj(phase) * apc + c * aqc;
        }
      }
    }
  }

  eigenvalues.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) eigenvalues[i] = A(i, i).real();
}

// B = V diag(f(lambda)) V†.
std::vector<Complex> assemble(const std::vector<Complex>& v,
                              const std::vector<double>& lam, std::size_t n) {
  std::vector<Complex> out(n * n, Complex(0.0, 0.0));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      Complex s(0.0, 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        s += v[r * n + k] * lam[k] * std::conj(v[c * n + k]);
      }
      out[r * n + c] = s;
    }
  }
  return out;
}

std::vector<Complex> matmul(const std::vector<Complex>& a,
                            const std::vector<Complex>& b, std::size_t n) {
  std::vector<Complex> out(n * n, Complex(0.0, 0.0));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex ark = a[r * n + k];
      if (ark == Complex(0.0, 0.0)) continue;
      for (std::size_t c = 0; c < n; ++c) out[r * n + c] += ark * b[k * n + c];
    }
  }
  return out;
}

}  // namespace

// ------------------------------ indexing -------------------------------

std::size_t dimension(const ModeRegister& reg) {
  std::size_t dim = 1;
  for (std::size_t i = 0; i < reg.size(); ++i) {
    dim *= static_cast<std::size_t>(reg.truncation()) + 1;
  }
  return dim;
}

std::size_t ket_to_index(const ModeRegister& reg, const FockKet& ket) {
  std::size_t idx = 0;
  std::size_t stride = 1;
  const std::size_t base = static_cast<std::size_t>(reg.truncation()) + 1;
  for (std::size_t i = 0; i < ket.size(); ++i) {
    idx += static_cast<std::size_t>(ket[i]) * stride;
    stride *= base;
  }
  return idx;
}

FockKet index_to_ket(const ModeRegister& reg, std::size_t index) {
  FockKet ket(reg.size(), 0);
  const std::size_t base = static_cast<std::size_t>(reg.truncation()) + 1;
  for (std::size_t i = 0; i < reg.size(); ++i) {
    ket[i] = static_cast<int>(index % base);
    index /= base;
  }
  return ket;
}

double DenseState::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amp) s += std::norm(a);
  return s;
}

DenseState lift(const StateVector& state) {
  const auto& reg = state.mode_register();
  const std::size_t dim = dimension(reg);
  if (dim > kMaxDimension) {
    throw std::invalid_argument("register too large for the dense oracle");
  }
  DenseState out{reg, std::vector<Complex>(dim, Complex(0.0, 0.0))};
  for (const auto& [ket, amp] : state.amplitudes()) {
    out.amp[ket_to_index(reg, ket)] = amp;
  }
  return out;
}

StateVector lower(const DenseState& dense) {
  StateVector out(dense.reg);
  for (std::size_t i = 0; i < dense.amp.size(); ++i) {
    if (std::abs(dense.amp[i]) == 0.0) continue;
    out.set_amplitude(index_to_ket(dense.reg, i), dense.amp[i]);
  }
  return out;
}

// ------------------------------ operators ------------------------------

DenseOperator element_operator(const optics::Element& element, const ModeRegister& reg) {
  const std::size_t dim = dimension(reg);
  if (dim > kMaxDimension) {
    throw std::invalid_argument("register too large for the dense oracle");
  }
  DenseOperator op{dim, std::vector<Complex>(dim * dim, Complex(0.0, 0.0))};
  std::vector<std::size_t> active;

  if (const auto* ps = std::get_if<optics::PhaseShifter>(&element)) {
    const std::size_t idx = reg.index_of(ps->mode);
    for (std::size_t i = 0; i < dim; ++i) {
      const FockKet ket = index_to_ket(reg, i);
      op.at(i, i) = std::polar(1.0, ps->phi * ket[idx]);
    }
  } else if (std::holds_alternative<optics::PolarizingBeamSplitter>(element)) {
    for (std::size_t i = 0; i < dim; ++i) op.at(i, i) = Complex(1.0, 0.0);
  } else {
    const auto modes = optics::element_modes(element);
    const std::size_t ia = reg.index_of(modes[0]);
    const std::size_t ib = reg.index_of(modes[1]);
    const auto m = optics::mode_matrix(element).m;
    for (std::size_t col = 0; col < dim; ++col) {
      expand_two_mode(reg, col, ia, ib, m,
                      [&](std::size_t row, Complex coeff) { op.at(row, col) += coeff; });
    }
    active = {ia, ib};
  }

  enforce_unitary(op, reg, active);
  return op;
}

DenseState apply(const DenseOperator& op, const DenseState& state) {
  if (op.dim != state.amp.size()) {
    throw std::invalid_argument("operator/state dimension mismatch");
  }
  DenseState out{state.reg, std::vector<Complex>(op.dim, Complex(0.0, 0.0))};
  for (std::size_t r = 0; r < op.dim; ++r) {
    Complex s(0.0, 0.0);
    for (std::size_t c = 0; c < op.dim; ++c) s += op.at(r, c) * state.amp[c];
    out.amp[r] = s;
  }
  return out;
}

DenseState apply_circuit(const optics::Circuit& circuit, DenseState state) {
  for (const auto& e : circuit.elements) {
    if (const auto* pbs = std::get_if<optics::PolarizingBeamSplitter>(&e)) {
      std::vector<ModeId> modes = state.reg.modes();
      for (auto& m : modes) {
        if (m.label == pbs->in_path + ".H") m.label = pbs->out_h + ".H";
        if (m.label == pbs->in_path + ".V") m.label = pbs->out_v + ".V";
      }
      state.reg = ModeRegister(std::move(modes), state.reg.truncation());
      continue;
    }
    // Direct column action on the vector; building the full matrix per
    // element would cost dim^2 for the same result.
    if (const auto* ps = std::get_if<optics::PhaseShifter>(&e)) {
      const std::size_t idx = state.reg.index_of(ps->mode);
      for (std::size_t i = 0; i < state.amp.size(); ++i) {
        if (state.amp[i] == Complex(0.0, 0.0)) continue;
        state.amp[i] *= std::polar(1.0, ps->phi * index_to_ket(state.reg, i)[idx]);
      }
      continue;
    }
    const auto modes = optics::element_modes(e);
    const std::size_t ia = state.reg.index_of(modes[0]);
    const std::size_t ib = state.reg.index_of(modes[1]);
    const auto m = optics::mode_matrix(e).m;
    DenseState next{state.reg, std::vector<Complex>(state.amp.size(), Complex(0.0, 0.0))};
    for (std::size_t col = 0; col < state.amp.size(); ++col) {
      const Complex amp = state.amp[col];
      if (amp == Complex(0.0, 0.0)) continue;
      expand_two_mode(state.reg, col, ia, ib, m,
                      [&](std::size_t row, Complex coeff) { next.amp[row] += amp * coeff; });
    }
    state = std::move(next);
  }
  return state;
}

DenseOperator multiply(const DenseOperator& a, const DenseOperator& b) {
  if (a.dim != b.dim) throw std::invalid_argument("operator dimension mismatch");
  DenseOperator out{a.dim, matmul(a.mat, b.mat, a.dim)};
  return out;
}

// ----------------------- click statistics ------------------------------

double ClickDistribution::total() const {
  double s = no_click + multi;
  for (double p : single) s += p;
  return s;
}

ClickDistribution exact_click_distribution(const DenseState& state,
                                           const std::vector<ModeId>& detector_modes) {
  std::vector<std::size_t> positions;
  positions.reserve(detector_modes.size());
  for (const auto& m : detector_modes) positions.push_back(state.reg.index_of(m));
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      if (positions[i] == positions[j]) {
        throw std::invalid_argument("detector modes must be disjoint");
      }
    }
  }

  ClickDistribution out;
  out.single.assign(detector_modes.size(), 0.0);
  for (std::size_t i = 0; i < state.amp.size(); ++i) {
    const double p = std::norm(state.amp[i]);
    if (p == 0.0) continue;
    const FockKet ket = index_to_ket(state.reg, i);
    int clicking = 0;
    std::size_t which = 0;
    for (std::size_t dpos = 0; dpos < positions.size(); ++dpos) {
      if (ket[positions[dpos]] >= 1) {
        ++clicking;
        which = dpos;
      }
    }
    if (clicking == 0) {
      out.no_click += p;
    } else if (clicking == 1) {
      out.single[which] += p;
    } else {
      out.multi += p;
    }
  }
  return out;
}

// ----------------------- density-matrix utilities ----------------------

DensityMatrix density_matrix(const MixedState& state) {
  if (state.empty()) throw std::invalid_argument("empty mixture");
  const ModeRegister reg = state.components().front().state.mode_register();
  const std::size_t dim = dimension(reg);
  if (dim > kMaxDimension) {
    throw std::invalid_argument("register too large for the dense oracle");
  }
  DensityMatrix out{reg, dim, std::vector<Complex>(dim * dim, Complex(0.0, 0.0))};
  for (const auto& c : state.components()) {
    if (c.state.mode_register() != reg) {
      throw std::invalid_argument("mixture components use different registers");
    }
    const DenseState psi = lift(c.state);
    for (std::size_t r = 0; r < dim; ++r) {
      if (psi.amp[r] == Complex(0.0, 0.0)) continue;
      for (std::size_t col = 0; col < dim; ++col) {
        out.rho[r * dim + col] += c.weight * psi.amp[r] * std::conj(psi.amp[col]);
      }
    }
  }
  return out;
}

namespace {

// Square roots of eigenvalues, with near-zero noise eigenvalues clamped;
// sqrt amplifies +-1e-16 rounding noise into 1e-8 otherwise.
void sqrt_spectrum(std::vector<double>& lam) {
  double peak = 0.0;
  for (double l : lam) peak = std::max(peak, std::abs(l));
  const double floor_value = peak * 1e-12;
  for (double& l : lam) l = l > floor_value ? std::sqrt(l) : 0.0;
}

}  // namespace

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim != sigma.dim) throw std::invalid_argument("density dimension mismatch");
  const std::size_t n = rho.dim;

  std::vector<Complex> a = rho.rho;
  std::vector<double> lam;
  std::vector<Complex> v;
  jacobi_hermitian(a, n, lam, v);
  sqrt_spectrum(lam);
  const std::vector<Complex> sqrt_rho = assemble(v, lam, n);

  std::vector<Complex> inner = matmul(matmul(sqrt_rho, sigma.rho, n), sqrt_rho, n);
  jacobi_hermitian(inner, n, lam, v);
  sqrt_spectrum(lam);
  double tr = 0.0;
  for (double l : lam) tr += l;
  return tr * tr;
}

double pure_fidelity(const StateVector& psi, const MixedState& rho) {
  double f = 0.0;
  for (const auto& c : rho.components()) {
    f += c.weight * std::norm(fock::inner(psi, c.state));
  }
  return f;
}

double max_abs_difference(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim != b.dim) throw std::invalid_argument("density dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rho.size(); ++i) {
    m = std::max(m, std::abs(a.rho[i] - b.rho[i]));
  }
  return m;
}

DensityMatrix apply_loss_dense(const DensityMatrix& rho, const ModeId& mode,
                               double eta) {
  if (eta < 0.0 || eta >= 1.0) throw std::invalid_argument("eta outside [0, 1)");
  const std::size_t pos = rho.reg.index_of(mode);
  const int d = rho.reg.truncation();
  const std::size_t n = rho.dim;

  DensityMatrix out{rho.reg, n, std::vector<Complex>(n * n, Complex(0.0, 0.0))};
  for (int k = 0; k <= d; ++k) {
    // K_k as a dense matrix on the full register.
    std::vector<Complex> kraus(n * n, Complex(0.0, 0.0));
    for (std::size_t col = 0; col < n; ++col) {
      FockKet ket = index_to_ket(rho.reg, col);
      const int occ = ket[pos];
      if (occ < k) continue;
      const double coeff = std::sqrt(binom(occ, k) * std::pow(1.0 - eta, occ - k) *
                                     std::pow(eta, k));
      ket[pos] = occ - k;
      kraus[ket_to_index(rho.reg, ket) * n + col] = coeff;
    }
    const auto kr = matmul(kraus, rho.rho, n);
    // out += K rho K†
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        Complex s(0.0, 0.0);
        for (std::size_t t = 0; t < n; ++t) {
          s += kr[r * n + t] * std::conj(kraus[c * n + t]);
        }
        out.rho[r * n + c] += s;
      }
    }
  }
  return out;
}

// ----------------------- CHSH reference route --------------------------

namespace {

// Mixture of two noisy links over [L1, L2, R1, R2] at d = 2, built by
// direct amplitude placement.
struct PneMixture {
  ModeRegister reg;
  std::vector<std::pair<double, DenseState>> components;
};

PneMixture compose_dense_pne(double alpha, double c_vacuum, double phi12) {
  const double beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
  const Complex phase = std::polar(1.0, phi12);
  ModeRegister reg({ModeId{"L1"}, ModeId{"L2"}, ModeId{"R1"}, ModeId{"R2"}}, 2);
  const std::size_t dim = dimension(reg);

  auto blank = [&]() { return DenseState{reg, std::vector<Complex>(dim, Complex(0.0, 0.0))}; };
  auto idx = [&](int l1, int l2, int r1, int r2) {
    return ket_to_index(reg, FockKet{l1, l2, r1, r2});
  };

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  DenseState pure_pure = blank();
  pure_pure.amp[idx(1, 1, 0, 0)] = inv_sqrt2 * alpha;
  pure_pure.amp[idx(1, 0, 0, 1)] = inv_sqrt2 * phase * beta;
  pure_pure.amp[idx(0, 1, 1, 0)] = phase * inv_sqrt2 * alpha;
  pure_pure.amp[idx(0, 0, 1, 1)] = phase * phase * inv_sqrt2 * beta;

  DenseState vac_pure = blank();
  vac_pure.amp[idx(0, 1, 0, 0)] = alpha;
  vac_pure.amp[idx(0, 0, 0, 1)] = phase * beta;

  DenseState pure_vac = blank();
  pure_vac.amp[idx(1, 0, 0, 0)] = inv_sqrt2;
  pure_vac.amp[idx(0, 0, 1, 0)] = phase * inv_sqrt2;

  DenseState vac_vac = blank();
  vac_vac.amp[idx(0, 0, 0, 0)] = Complex(1.0, 0.0);

  const double denom = (c_vacuum + 1.0) * (c_vacuum + 1.0);
  PneMixture out{reg, {}};
  out.components.emplace_back(1.0 / denom, std::move(pure_pure));
  out.components.emplace_back(c_vacuum / denom, std::move(vac_pure));
  out.components.emplace_back(c_vacuum / denom, std::move(pure_vac));
  out.components.emplace_back(c_vacuum * c_vacuum / denom, std::move(vac_vac));
  return out;
}

}  // namespace

CoincidenceProbabilities exact_coincidence_probabilities(double alpha, double c_vacuum,
                                                         double phi12, double phi_l,
                                                         double phi_r) {
  PneMixture mix = compose_dense_pne(alpha, c_vacuum, phi12);
  const ModeRegister& reg = mix.reg;

  optics::Circuit meas;
  meas.elements = {
      optics::PhaseShifter{ModeId{"L2"}, phi_l},
      optics::BeamSplitter{ModeId{"L1"}, ModeId{"L2"}, 0.5},
      optics::PhaseShifter{ModeId{"R2"}, phi_r},
      optics::BeamSplitter{ModeId{"R1"}, ModeId{"R2"}, 0.5},
  };

  CoincidenceProbabilities out;
  for (auto& [w, comp] : mix.components) {
    if (w == 0.0) continue;
    const DenseState evolved = apply_circuit(meas, comp);
    for (std::size_t i = 0; i < evolved.amp.size(); ++i) {
      const double p = w * std::norm(evolved.amp[i]);
      if (p == 0.0) continue;
      const FockKet ket = index_to_ket(reg, i);
      const bool d1 = ket[0] >= 1, d2 = ket[1] >= 1;
      const bool d3 = ket[2] >= 1, d4 = ket[3] >= 1;
      if (d1 + d2 != 1 || d3 + d4 != 1) continue;  // one click per side
      if (d1 && d3) out.p13 += p;
      if (d2 && d4) out.p24 += p;
      if (d1 && d4) out.p14 += p;
      if (d2 && d3) out.p23 += p;
    }
  }
  return out;
}

double exact_conditioned_correlation(double alpha, double c_vacuum, double phi12,
                                     double phi_l, double phi_r) {
  const auto p = exact_coincidence_probabilities(alpha, c_vacuum, phi12, phi_l, phi_r);
  const double mass = p.coincidence();
  if (mass <= 0.0) {
    throw std::runtime_error("no coincidence mass at the requested settings");
  }
  return (p.p13 + p.p24 - p.p14 - p.p23) / mass;
}

}  // namespace entsim::oracle
