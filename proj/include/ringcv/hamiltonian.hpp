// Copyright 2026 The ringcv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Effective ring-cavity Hamiltonians. Two counter-propagating pump pairs
// drive each ensemble; adiabatic elimination of the excited level leaves a
// bilinear coupling between the cavity fields and the collective modes:
//
//   clockwise pumping:
//     H = sum_n [ (bu_n e^{-i phi_un} C0k_n + bs_n e^{-i phi_sn} C0k_n^dag) a+^dag
//               + (bu_n e^{-i phi_un} C2k_n + bs_n e^{-i phi_sn} C-2k_n^dag) a-^dag ] + H.c.
//
//   anticlockwise pumping swaps a+ <-> a- and +2k <-> -2k.
//
// The coupling scales are bu = sqrt(N) Omega_u g_u / (2 Delta_u) and
// bs = sqrt(N) Omega_s g_s / (2 Delta_s); they are only meaningful when the
// pump tones satisfy the Stark-shift and two-photon resonance conditions
// checked below.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ringcv/core.hpp"
#include "ringcv/ladder.hpp"

namespace ringcv {

/// Pumping direction of the two-tone drive.
enum class PumpDirection { Clockwise, Anticlockwise };

inline std::string to_string(PumpDirection d) {
  return d == PumpDirection::Clockwise ? "clockwise" : "anticlockwise";
}

/// Raw experimental parameters for one ensemble's drive channels (angular
/// frequencies, rad/s).
struct PhysicalParams {
  double n_atoms = 0.0;
  double rabi_u = 0.0, rabi_s = 0.0;        // pump Rabi frequencies
  double coupling_u = 0.0, coupling_s = 0.0;  // single-atom cavity couplings
  double detuning_u = 0.0, detuning_s = 0.0;  // excited-state detunings
  double laser_freq_u = 0.0, laser_freq_s = 0.0;
  double mode_splitting = 0.0;  // omega_1, ground-level splitting
  double cavity_detuning = 0.0;  // delta_c
  double kappa = 0.0;            // cavity energy decay rate
  double gamma = 0.0;            // atomic spontaneous decay rate
};

/// Two-tone coupling strengths derived from PhysicalParams.
struct CouplingStrengths {
  double beta_u = 0.0;
  double beta_s = 0.0;
};

/// beta = sqrt(N) * Omega * g / (2 Delta) for each tone.
inline CouplingStrengths coupling_strengths(const PhysicalParams& p) {
  if (p.n_atoms <= 0.0) throw Error("atom number must be positive");
  if (p.detuning_u == 0.0 || p.detuning_s == 0.0) {
    throw Error("detunings must be nonzero");
  }
  const double root_n = std::sqrt(p.n_atoms);
  return CouplingStrengths{
      root_n * p.rabi_u * p.coupling_u / (2.0 * p.detuning_u),
      root_n * p.rabi_s * p.coupling_s / (2.0 * p.detuning_s)};
}

/// One named resonance / consistency condition with its two sides.
struct ResonanceCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double deviation = 0.0;  // |lhs - rhs| / max(|lhs|, |rhs|, floor)
  bool pass = false;
};

/// Validates the three conditions that make the bilinear model valid:
/// equal Stark shifts per photon (g_u^2/Delta_u = g_s^2/Delta_s), cavity
/// detuning absorbing the collective shift (delta_c + N g_u^2/Delta_u = 0),
/// and the two-photon resonance (omega_Ls - omega_Lu = 2 omega_1).
inline std::vector<ResonanceCheck> check_resonance_conditions(
    const PhysicalParams& p, double rtol = 1e-6) {
  auto make = [rtol](std::string name, double lhs, double rhs,
                     double scale) {
    ResonanceCheck c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    const double denom = std::max({std::abs(lhs), std::abs(rhs), scale});
    c.deviation = denom > 0.0 ? std::abs(lhs - rhs) / denom : 0.0;
    c.pass = c.deviation <= rtol;
    return c;
  };
  const double shift_u = p.coupling_u * p.coupling_u / p.detuning_u;
  const double shift_s = p.coupling_s * p.coupling_s / p.detuning_s;
  std::vector<ResonanceCheck> checks;
  checks.push_back(make("equal_stark_shift", shift_u, shift_s, 0.0));
  checks.push_back(make("cavity_detuning_compensation",
                        p.cavity_detuning + p.n_atoms * shift_u, 0.0,
                        std::abs(p.n_atoms * shift_u)));
  checks.push_back(make("two_photon_resonance",
                        p.laser_freq_s - p.laser_freq_u,
                        2.0 * p.mode_splitting, 0.0));
  return checks;
}

/// A violated adiabaticity assumption, if any; empty list when the
/// parameters are safely dispersive (|Delta| >= factor * Omega, g, gamma).
inline std::vector<std::string> check_dispersive_regime(
    const PhysicalParams& p, double factor = 50.0) {
  std::vector<std::string> violations;
  auto check = [&](double detuning, double value, const std::string& what) {
    if (std::abs(detuning) < factor * std::abs(value)) {
      violations.push_back(what + " violates |Delta| >= " +
                           std::to_string(factor) + "x requirement");
    }
  };
  check(p.detuning_u, p.rabi_u, "rabi_u vs detuning_u");
  check(p.detuning_u, p.coupling_u, "coupling_u vs detuning_u");
  check(p.detuning_u, p.gamma, "gamma vs detuning_u");
  check(p.detuning_s, p.rabi_s, "rabi_s vs detuning_s");
  check(p.detuning_s, p.coupling_s, "coupling_s vs detuning_s");
  check(p.detuning_s, p.gamma, "gamma vs detuning_s");
  return violations;
}

/// Residual spontaneous-scattering rate (Hz) of the adiabatically
/// eliminated excited state: (1/4) (gamma / 2 pi) (Omega / Delta)^2 with
/// the larger of the two tone ratios. This is an order-of-magnitude
/// validity figure, not a dynamical ingredient.
inline double spontaneous_rate_estimate(const PhysicalParams& p) {
  const double ratio = std::max(std::abs(p.rabi_u / p.detuning_u),
                                std::abs(p.rabi_s / p.detuning_s));
  return 0.25 * (p.gamma / (2.0 * std::numbers::pi)) * ratio * ratio;
}

/// Per-ensemble drive settings: tone amplitudes (rad/s) and phases.
struct EnsembleDrive {
  double beta_u = 0.0;
  double beta_s = 0.0;
  double phi_u = 0.0;
  double phi_s = 0.0;
};

/// Full drive configuration: direction plus one EnsembleDrive per ensemble
/// in the registry.
struct LaserConfig {
  PumpDirection direction = PumpDirection::Clockwise;
  std::vector<EnsembleDrive> drives;
};

/// Thrown when drive amplitudes sit outside the dynamically stable region.
class StabilityError : public Error {
 public:
  explicit StabilityError(const std::string& what) : Error(what) {}
};

namespace detail {

inline void validate_drives(const LaserConfig& config) {
  for (std::size_t n = 0; n < config.drives.size(); ++n) {
    const auto& d = config.drives[n];
    if (d.beta_s < 0.0 || d.beta_u < 0.0) {
      throw StabilityError("drive amplitudes must be nonnegative (ensemble " +
                           std::to_string(n + 1) + ")");
    }
    const bool undriven = d.beta_u == 0.0 && d.beta_s == 0.0;
    if (!undriven && d.beta_s >= d.beta_u) {
      throw StabilityError(
          "unstable drive: beta_s >= beta_u on ensemble " +
          std::to_string(n + 1) + " (" + std::to_string(d.beta_s) + " >= " +
          std::to_string(d.beta_u) + ")");
    }
  }
}

}  // namespace detail

/// Ladder-operator form of the two-tone ring-cavity Hamiltonian for the
/// given direction; see the header comment. One EnsembleDrive per
/// registered ensemble is required, and each driven ensemble must satisfy
/// beta_u > beta_s >= 0.
inline OperatorExpr effective_hamiltonian_terms(const ModeRegistry& registry,
                                                const LaserConfig& config) {
  detail::validate_drives(config);
  const bool clockwise = config.direction == PumpDirection::Clockwise;
  const ModeLabel zero_cavity =
      clockwise ? ModeLabel::cavity_plus() : ModeLabel::cavity_minus();
  const ModeLabel pair_cavity =
      clockwise ? ModeLabel::cavity_minus() : ModeLabel::cavity_plus();
  const int pair_order = clockwise ? 2 : -2;

  // Touch both cavity labels up front so a malformed registry fails loudly.
  registry.index_of(ModeLabel::cavity_plus());
  registry.index_of(ModeLabel::cavity_minus());

  OperatorExpr half;
  for (std::size_t n = 0; n < config.drives.size(); ++n) {
    const int ensemble = static_cast<int>(n) + 1;
    const auto& d = config.drives[n];
    const Complex cu = d.beta_u * std::exp(Complex(0.0, -d.phi_u));
    const Complex cs = d.beta_s * std::exp(Complex(0.0, -d.phi_s));
    const ModeLabel c0 = ModeLabel::collective(ensemble, 0);
    const ModeLabel c_pair = ModeLabel::collective(ensemble, pair_order);
    const ModeLabel c_anti = ModeLabel::collective(ensemble, -pair_order);
    registry.index_of(c0);
    registry.index_of(c_pair);
    registry.index_of(c_anti);
    // (bu C0 + bs C0^dag) a_zero^dag
    half.add2(cu, c0, false, zero_cavity, true);
    half.add2(cs, c0, true, zero_cavity, true);
    // (bu C_pair + bs C_anti^dag) a_pair^dag
    half.add2(cu, c_pair, false, pair_cavity, true);
    half.add2(cs, c_anti, true, pair_cavity, true);
  }
  return half.plus_hermitian_conjugate();
}

/// Quadrature form of effective_hamiltonian_terms.
inline QuadraticHamiltonian effective_hamiltonian(const ModeRegistry& registry,
                                                  const LaserConfig& config) {
  return compile_quadratic(registry, effective_hamiltonian_terms(registry,
                                                                 config));
}

/// Beamsplitter coupling g (a^dag b + a b^dag) between two registered
/// modes; the decoupled-frame limit of the full Hamiltonian.
inline OperatorExpr mixer_terms(const ModeRegistry& registry, ModeLabel a,
                                ModeLabel b, double g) {
  registry.index_of(a);
  registry.index_of(b);
  OperatorExpr half;
  half.add2(g, a, true, b, false);
  return half.plus_hermitian_conjugate();
}

inline QuadraticHamiltonian mixer_hamiltonian(const ModeRegistry& registry,
                                              ModeLabel a, ModeLabel b,
                                              double g) {
  return compile_quadratic(registry, mixer_terms(registry, a, b, g));
}

/// One cavity mode driven by a Bogoliubov combination of a single
/// collective mode: (beta_u c + beta_s c^dag) a^dag + H.c. This is the
/// minimal system showing the squeeze-then-relax mechanism and is small
/// enough for the Fock oracle.
inline OperatorExpr squeezer_mixer_terms(const ModeRegistry& registry,
                                         ModeLabel cavity, ModeLabel atom,
                                         double beta_u, double beta_s) {
  registry.index_of(cavity);
  registry.index_of(atom);
  OperatorExpr half;
  half.add2(beta_u, atom, false, cavity, true);
  half.add2(beta_s, atom, true, cavity, true);
  return half.plus_hermitian_conjugate();
}

inline QuadraticHamiltonian squeezer_mixer_hamiltonian(
    const ModeRegistry& registry, ModeLabel cavity, ModeLabel atom,
    double beta_u, double beta_s) {
  return compile_quadratic(
      registry, squeezer_mixer_terms(registry, cavity, atom, beta_u, beta_s));
}

}  // namespace ringcv
