#include "entsim/chsh.hpp"

#include <cmath>
#include <stdexcept>

#include "entsim/optics.hpp"
#include "entsim/oracle.hpp"

namespace entsim::chsh {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

using fock::Complex;
using fock::FockKet;
using fock::ModeId;
using fock::ModeRegister;
using fock::StateVector;

ModeRegister pne_register() {
  return ModeRegister({ModeId{"L1"}, ModeId{"L2"}, ModeId{"R1"}, ModeId{"R2"}}, 2);
}

// Coincidence classes for one sampled trial.
enum ClickClass : std::size_t {
  kC13 = 0,
  kC24 = 1,
  kC14 = 2,
  kC23 = 3,
  kOther = 4,
  kClassCount = 5
};

}  // namespace

PneState PneState::from_alpha(double alpha, double phi12, double c_vacuum) {
  if (alpha < 0.0 || alpha > 1.0) {
    throw std::invalid_argument("alpha must lie in [0, 1]");
  }
  if (c_vacuum < 0.0) {
    throw std::invalid_argument("c_vacuum must be >= 0");
  }
  PneState out;
  out.alpha = alpha;
  out.beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
  out.c_vacuum = c_vacuum;
  out.phi12 = phi12;
  return out;
}

MixedState compose_pne(double alpha, double phi12, double c_vacuum) {
  if (std::abs(alpha) > 1.0) {
    throw std::invalid_argument("alpha must lie in [-1, 1]");
  }
  const double beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
  const Complex phase = std::polar(1.0, phi12);
  const ModeRegister reg = pne_register();

  // Link 1 (L1/R1), maximally entangled; link 2 (L2/R2), tunable.
  ModeRegister link1({ModeId{"L1"}, ModeId{"R1"}}, 2);
  ModeRegister link2({ModeId{"L2"}, ModeId{"R2"}}, 2);

  StateVector epr(link1);
  epr.set_amplitude(FockKet{1, 0}, 1.0 / kSqrt2);
  epr.set_amplitude(FockKet{0, 1}, phase / kSqrt2);

  StateVector tunable(link2);
  tunable.set_amplitude(FockKet{1, 0}, alpha);
  tunable.set_amplitude(FockKet{0, 1}, phase * beta);

  const StateVector vac1 = StateVector::vacuum(link1);
  const StateVector vac2 = StateVector::vacuum(link2);

  const double denom = (c_vacuum + 1.0) * (c_vacuum + 1.0);

  // Tensor gives [L1, R1, L2, R2]; reorder to [L1, L2, R1, R2] by
  // rebuilding kets on the canonical register.
  auto combine = [&](const StateVector& a, const StateVector& b) {
    const StateVector prod = fock::tensor(a, b);
    StateVector out(reg);
    for (const auto& [ket, amp] : prod.amplitudes()) {
      out.set_amplitude(FockKet{ket[0], ket[2], ket[1], ket[3]}, amp);
    }
    return out;
  };

  MixedState out;
  out.add(1.0 / denom, combine(epr, tunable));
  if (c_vacuum > 0.0) {
    out.add(c_vacuum / denom, combine(epr, vac2));
    out.add(c_vacuum / denom, combine(vac1, tunable));
    out.add(c_vacuum * c_vacuum / denom, combine(vac1, vac2));
  }
  return out;
}

double projection_success_probability(double c_vacuum) {
  if (c_vacuum < 0.0) {
    throw std::invalid_argument("c_vacuum must be >= 0");
  }
  return 1.0 / (4.0 * (c_vacuum + 1.0) * (c_vacuum + 1.0));
}

double correlation_paper(double alpha, double phi_l, double phi_r) {
  if (std::abs(alpha) > 1.0) {
    throw std::invalid_argument("alpha must lie in [-1, 1]");
  }
  const double a2 = alpha * alpha;
  return 4.0 * a2 * (1.0 - a2) * std::cos(phi_l - phi_r);
}

namespace {

// Exact probabilities of the five click classes for the composed mixture
// measured at (phi_l, phi_r). The readout maps each collective excitation
// to one photon in the matching mode, occupations carried one to one.
std::array<double, kClassCount> class_probabilities(const PneState& pne, double phi_l,
                                                    double phi_r) {
  MixedState mixture = compose_pne(pne.alpha, pne.phi12, pne.c_vacuum);
  const optics::Circuit meas_l =
      optics::build_measurement_circuit(phi_l, {ModeId{"L1"}, ModeId{"L2"}});
  const optics::Circuit meas_r =
      optics::build_measurement_circuit(phi_r, {ModeId{"R1"}, ModeId{"R2"}});
  mixture = optics::apply_circuit(optics::apply_circuit(mixture, meas_l), meas_r);

  std::array<double, kClassCount> probs{};
  for (const auto& comp : mixture.components()) {
    const auto& reg = comp.state.mode_register();
    const std::size_t l1 = reg.index_of(ModeId{"L1"});
    const std::size_t l2 = reg.index_of(ModeId{"L2"});
    const std::size_t r1 = reg.index_of(ModeId{"R1"});
    const std::size_t r2 = reg.index_of(ModeId{"R2"});
    for (const auto& [ket, amp] : comp.state.amplitudes()) {
      const double p = comp.weight * std::norm(amp);
      const bool d1 = ket[l1] >= 1, d2 = ket[l2] >= 1;
      const bool d3 = ket[r1] >= 1, d4 = ket[r2] >= 1;
      std::size_t cls = kOther;
      if (d1 + d2 == 1 && d3 + d4 == 1) {
        if (d1 && d3) cls = kC13;
        if (d2 && d4) cls = kC24;
        if (d1 && d4) cls = kC14;
        if (d2 && d3) cls = kC23;
      }
      probs[cls] += p;
    }
  }
  return probs;
}

}  // namespace

double CorrelationEstimate::coincidence_fraction() const {
  return trials > 0 ? static_cast<double>(coincidences) / static_cast<double>(trials)
                    : 0.0;
}

CorrelationEstimate correlation_simulated(const PneState& pne, double phi_l,
                                          double phi_r, long trials, SplitMix64& rng,
                                          bool conditioned) {
  if (trials < 1) {
    throw std::invalid_argument("trials must be >= 1");
  }
  const auto probs = class_probabilities(pne, phi_l, phi_r);

  std::array<long, kClassCount> counts{};
  for (long t = 0; t < trials; ++t) {
    counts[rng.sample_index(std::span<const double>(probs.data(), probs.size()), 1.0)]++;
  }

  CorrelationEstimate out;
  out.phi_l = phi_l;
  out.phi_r = phi_r;
  out.n13 = counts[kC13];
  out.n24 = counts[kC24];
  out.n14 = counts[kC14];
  out.n23 = counts[kC23];
  out.trials = trials;
  out.coincidences = out.n13 + out.n24 + out.n14 + out.n23;
  if (out.coincidences == 0) {
    throw NoCoincidenceError();
  }

  const double numer = static_cast<double>(out.n13 + out.n24 - out.n14 - out.n23);
  if (conditioned) {
    out.value = numer / static_cast<double>(out.coincidences);
    out.stderr_value =
        std::sqrt((1.0 - out.value * out.value) / static_cast<double>(out.coincidences));
  } else {
    // Unconditioned variant: outcomes in {-1, 0, +1} averaged over all
    // trials, variance p_coinc - E^2.
    out.value = numer / static_cast<double>(trials);
    const double var =
        std::max(0.0, out.coincidence_fraction() - out.value * out.value);
    out.stderr_value = std::sqrt(var / static_cast<double>(trials));
  }
  return out;
}

double s_paper(double alpha) {
  const double a2 = alpha * alpha;
  return 8.0 * kSqrt2 * a2 * (1.0 - a2);
}

SReport s_simulated(const PneState& pne, const ChshSettings& settings, long trials,
                    std::uint64_t seed, std::uint64_t stream_base, bool conditioned) {
  SReport report;
  report.alpha = pne.alpha;

  double s_mc = 0.0;
  double var_s = 0.0;
  double s_model = 0.0;
  double s_oracle = 0.0;
  for (std::size_t k = 0; k < ChshSettings::kPairs.size(); ++k) {
    const auto [li, ri, sign] = ChshSettings::kPairs[k];
    const double phi_l = settings.phi_l[static_cast<std::size_t>(li)];
    const double phi_r = settings.phi_r[static_cast<std::size_t>(ri)];

    SplitMix64 rng = SplitMix64::stream(seed, stream_base + k);
    CorrelationEstimate est =
        correlation_simulated(pne, phi_l, phi_r, trials, rng, conditioned);
    s_mc += sign * est.value;
    var_s += est.stderr_value * est.stderr_value;
    s_model += sign * correlation_paper(pne.alpha, phi_l, phi_r);
    s_oracle += sign * oracle::exact_conditioned_correlation(
                           pne.alpha, pne.c_vacuum, pne.phi12, phi_l, phi_r);
    report.correlations[k] = est;
  }

  report.s_paper = s_model;
  report.s_oracle = s_oracle;
  report.s_mc = s_mc;
  report.s_mc_ci95 = 1.959963984540054 * std::sqrt(var_s);
  report.violation_paper = report.s_paper > 2.0;
  report.violation_mc = report.s_mc - report.s_mc_ci95 > 2.0;
  return report;
}

std::pair<double, double> violation_window_paper(double tolerance) {
  if (tolerance <= 0.0) {
    throw std::invalid_argument("tolerance must be > 0");
  }
  const double peak = 1.0 / kSqrt2;
  auto bisect = [&](double lo, double hi) {
    // s_paper - 2 changes sign exactly once on each half interval.
    const bool rising = s_paper(lo) < 2.0;
    while (hi - lo > tolerance) {
      const double mid = 0.5 * (lo + hi);
      const bool below = s_paper(mid) < 2.0;
      if (below == rising) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  return {bisect(1e-12, peak), bisect(peak, 1.0 - 1e-12)};
}

std::vector<SReport> scan_alpha(const std::vector<double>& grid,
                                const ChshSettings& settings, long trials,
                                double c_vacuum, double phi12, std::uint64_t seed,
                                bool conditioned) {
  if (grid.empty()) {
    throw std::invalid_argument("alpha grid must be nonempty");
  }
  std::vector<SReport> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const PneState pne = PneState::from_alpha(grid[i], phi12, c_vacuum);
    out.push_back(s_simulated(pne, settings, trials, seed,
                              static_cast<std::uint64_t>(i) * 4, conditioned));
  }
  return out;
}

}  // namespace entsim::chsh
