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

// Sequential preparation protocols. A protocol is a fixed list of drive
// steps; each step relaxes one Bogoliubov combination of collective modes
// into the lossy cavities. In a squeezed frame (the "analysis transform")
// every step is a plain beamsplitter between one collective mode and one
// cavity, so the steady state of the full sequence is the squeezed target
// state in the lab frame:
//   - OneTwoMode: one ensemble, two steps. Prepares a single-mode squeezed
//     C0k and a two-mode squeezed (C2k, C-2k) pair.
//   - FourMode: two ensembles, four steps. Prepares the nearest-neighbour
//     four-mode squeezed state on the +-2k sector; the golden ratio sets
//     the drive asymmetry between the ensembles.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "ringcv/core.hpp"
#include "ringcv/hamiltonian.hpp"
#include "ringcv/ladder.hpp"
#include "ringcv/lindblad.hpp"
#include "ringcv/squeezers.hpp"

namespace ringcv {

enum class ProtocolKind { OneTwoMode, FourMode };

inline std::string to_string(ProtocolKind kind) {
  return kind == ProtocolKind::OneTwoMode ? "one_two_mode" : "four_mode";
}

/// Full description of a protocol run. `xi` is the target squeezing
/// parameter; `beta_ref` the reference drive amplitude (rad/s); steps last
/// `step_duration` seconds each. `stability_margin` caps every resolved
/// tanh value; `fidelity_threshold` is the success criterion consumers
/// check against.
struct ProtocolSpec {
  ProtocolKind kind = ProtocolKind::OneTwoMode;
  double xi = 0.3;
  double kappa = 1.0;
  double beta_ref = 2.0;
  double step_duration = 10.0;
  int samples_per_step = 0;
  double stability_margin = 0.95;
  double fidelity_threshold = 0.99;

  /// Spec with the conventional defaults beta_ref = 2 kappa and
  /// step_duration = 10 / kappa.
  static ProtocolSpec make(ProtocolKind kind, double xi, double kappa = 1.0) {
    ProtocolSpec spec;
    spec.kind = kind;
    spec.xi = xi;
    spec.kappa = kappa;
    spec.beta_ref = 2.0 * kappa;
    spec.step_duration = 10.0 / kappa;
    return spec;
  }

  int n_ensembles() const { return kind == ProtocolKind::OneTwoMode ? 1 : 2; }
  int n_steps() const { return kind == ProtocolKind::OneTwoMode ? 2 : 4; }
  ModeRegistry registry() const { return ModeRegistry::canonical(n_ensembles()); }

  void validate() const {
    if (!(xi > 0.0)) throw Error("xi must be positive");
    if (!(kappa > 0.0)) throw Error("kappa must be positive");
    if (!(beta_ref > 0.0)) throw Error("beta_ref must be positive");
    if (!(step_duration > 0.0)) throw Error("step_duration must be positive");
    if (samples_per_step < 0) throw Error("samples_per_step must be >= 0");
    if (!(stability_margin > 0.0 && stability_margin < 1.0)) {
      throw Error("stability_margin must lie in (0, 1)");
    }
    if (!(fidelity_threshold > 0.0 && fidelity_threshold <= 1.0)) {
      throw Error("fidelity_threshold must lie in (0, 1]");
    }
  }
};

/// One resolved numeric parameter with the identifier of the design rule
/// that produced it (rule identifiers are stable API, used in reports).
struct ResolvedParam {
  std::string name;
  double value = 0.0;
  std::string source;
};

/// Fully resolved drive settings for one step.
struct StepParameters {
  int index = 0;
  PumpDirection direction = PumpDirection::Clockwise;
  LaserConfig laser;
  double duration = 0.0;
  ModeLabel addressed;     // collective mode this step relaxes
  ModeLabel cavity;        // cavity it relaxes through
  double tanh_argument = 0.0;  // lambda*xi, xi/lambda, or xi
  double ratio = 0.0;          // tanh(tanh_argument) = beta_s / beta_u
  double coupling = 0.0;       // beamsplitter rate in the squeezed frame
  std::vector<ResolvedParam> resolved;
};

namespace detail {

inline void append_drive_params(std::vector<ResolvedParam>& out,
                                const EnsembleDrive& d, int ensemble,
                                const std::string& source) {
  const std::string suffix = std::to_string(ensemble);
  out.push_back({"beta_u" + suffix, d.beta_u, source});
  out.push_back({"beta_s" + suffix, d.beta_s, source});
  out.push_back({"phi_u" + suffix, d.phi_u, source});
  out.push_back({"phi_s" + suffix, d.phi_s, source});
}

inline void check_margin(double tanh_argument, double margin) {
  const double ratio = std::tanh(tanh_argument);
  if (ratio > margin) {
    throw StabilityError(
        "resolved drive ratio tanh(" + std::to_string(tanh_argument) + ") = " +
        std::to_string(ratio) + " exceeds the stability margin " +
        std::to_string(margin));
  }
}

}  // namespace detail

/// Drive settings implementing step `step` (0-based) of `spec`. Throws
/// StabilityError when the requested squeezing cannot be reached with
/// beta_s < beta_u on every ensemble or violates the stability margin.
inline StepParameters resolve_step_parameters(const ProtocolSpec& spec,
                                              int step) {
  spec.validate();
  if (step < 0 || step >= spec.n_steps()) {
    throw Error("step index " + std::to_string(step) + " out of range for " +
                to_string(spec.kind));
  }

  StepParameters out;
  out.index = step;
  out.duration = spec.step_duration;
  const double beta = spec.beta_ref;

  if (spec.kind == ProtocolKind::OneTwoMode) {
    out.tanh_argument = spec.xi;
    detail::check_margin(out.tanh_argument, spec.stability_margin);
    out.ratio = std::tanh(spec.xi);
    out.direction =
        step == 0 ? PumpDirection::Clockwise : PumpDirection::Anticlockwise;
    out.addressed = ModeLabel::collective(1, step == 0 ? 2 : -2);
    out.cavity = step == 0 ? ModeLabel::cavity_minus() : ModeLabel::cavity_plus();
    out.laser.direction = out.direction;
    out.laser.drives = {{beta, beta * out.ratio, 0.0, 0.0}};
    out.coupling = beta / std::cosh(spec.xi);
    detail::append_drive_params(out.resolved, out.laser.drives[0], 1, "eq23");
  } else {
    const double lam = kGoldenRatio;
    const double pi = std::numbers::pi;
    // Steps 0 and 1 use the stiff squeeze lambda*xi; steps 2 and 3 the
    // soft one xi/lambda.
    out.tanh_argument = step < 2 ? lam * spec.xi : spec.xi / lam;
    out.ratio = std::tanh(out.tanh_argument);
    // Feasibility of the strongest step: the lambda-scaled companion drive
    // must itself stay below its pump tone.
    const double stiff = lam * std::tanh(lam * spec.xi);
    if (stiff >= 1.0) {
      throw StabilityError(
          "four-mode protocol is unstable at xi = " + std::to_string(spec.xi) +
          ": lambda tanh(lambda xi) = " + std::to_string(stiff) +
          " >= 1 (xi must stay below " +
          std::to_string(std::atanh(1.0 / lam) / lam) + ")");
    }
    detail::check_margin(out.tanh_argument, spec.stability_margin);

    EnsembleDrive d1;
    EnsembleDrive d2;
    std::string source;
    switch (step) {
      case 0:
        // Relax C2k(1) through the counter-propagating cavity.
        out.direction = PumpDirection::Clockwise;
        out.addressed = ModeLabel::collective(1, 2);
        out.cavity = ModeLabel::cavity_minus();
        d1 = {beta, lam * beta * out.ratio, 0.0, 0.0};
        d2 = {lam * beta, beta * out.ratio, 0.0, 0.0};
        source = "eq38";
        break;
      case 1:
        out.direction = PumpDirection::Anticlockwise;
        out.addressed = ModeLabel::collective(2, -2);
        out.cavity = ModeLabel::cavity_plus();
        d1 = {lam * beta, beta * out.ratio, 0.0, 0.0};
        d2 = {beta, lam * beta * out.ratio, 0.0, 0.0};
        source = "eq42";
        break;
      case 2:
        out.direction = PumpDirection::Clockwise;
        out.addressed = ModeLabel::collective(2, 2);
        out.cavity = ModeLabel::cavity_minus();
        d1 = {lam * beta, beta * out.ratio, 0.0, 0.0};
        d2 = {beta, lam * beta * out.ratio, pi, pi};
        source = "eq47";
        break;
      default:
        out.direction = PumpDirection::Anticlockwise;
        out.addressed = ModeLabel::collective(1, -2);
        out.cavity = ModeLabel::cavity_plus();
        d1 = {beta, lam * beta * out.ratio, pi, pi};
        d2 = {lam * beta, beta * out.ratio, 0.0, 0.0};
        source = "eq49";
        break;
    }
    out.laser.direction = out.direction;
    out.laser.drives = {d1, d2};
    out.coupling =
        beta * std::sqrt(1.0 + lam * lam) / std::cosh(out.tanh_argument);
    detail::append_drive_params(out.resolved, d1, 1, source);
    detail::append_drive_params(out.resolved, d2, 2, source);
  }
  out.resolved.push_back({"tanh_argument", out.tanh_argument, "derived"});
  out.resolved.push_back({"coupling", out.coupling, "derived"});
  detail::validate_drives(out.laser);
  return out;
}

/// The pure state the protocol prepares, on the full registry: vacuum
/// cavities, with the collective sector squeezed.
inline GaussianState target_state(const ProtocolSpec& spec) {
  spec.validate();
  const ModeRegistry registry = spec.registry();
  GaussianState state = vacuum_state(registry);
  if (spec.kind == ProtocolKind::OneTwoMode) {
    const auto sms =
        single_mode_squeezer(registry, ModeLabel::collective(1, 0), spec.xi);
    const auto tms =
        two_mode_squeezer(registry, ModeLabel::collective(1, 2),
                          ModeLabel::collective(1, -2), -spec.xi);
    state = apply_symplectic(state, tms * sms);
  } else {
    state = apply_symplectic(state, four_mode_squeezer(registry, spec.xi));
  }
  return state;
}

/// The squeezed frame V in which every step of `spec` is a pure
/// beamsplitter: states map as rho -> V rho V^dag (apply_symplectic) and
/// Hamiltonians as H -> V H V^dag (conjugate_hamiltonian). V maps the
/// target state to the vacuum.
inline SymplecticTransform analysis_transform(const ProtocolSpec& spec) {
  spec.validate();
  const ModeRegistry registry = spec.registry();
  if (spec.kind == ProtocolKind::OneTwoMode) {
    const auto sms =
        single_mode_squeezer(registry, ModeLabel::collective(1, 0), -spec.xi);
    const auto tms =
        two_mode_squeezer(registry, ModeLabel::collective(1, 2),
                          ModeLabel::collective(1, -2), spec.xi);
    return tms * sms;
  }
  const double lam = kGoldenRatio;
  const auto mixer = ensemble_mixer(registry);
  const auto stiff =
      two_mode_squeezer(registry, ModeLabel::collective(1, 2),
                        ModeLabel::collective(2, -2), lam * spec.xi);
  const auto soft =
      two_mode_squeezer(registry, ModeLabel::collective(2, 2),
                        ModeLabel::collective(1, -2), -spec.xi / lam);
  return stiff * (soft * mixer);
}

// ---------------------------------------------------------------------------
// Frame diagnostics
// ---------------------------------------------------------------------------

/// Coupling strength between one collective mode and the cavities in a
/// quadratic form (max-norm of the two 2x2 blocks).
struct ModeCavityCoupling {
  ModeLabel mode;
  double norm = 0.0;
};

/// How well one step, viewed in the squeezed frame, reduces to a
/// beamsplitter on its addressed mode alone.
struct DecouplingReport {
  int step_index = 0;
  ModeLabel addressed;
  double coupling = 0.0;           // fitted beamsplitter rate |g|
  double expected_coupling = 0.0;  // design value
  double coupling_error = 0.0;     // | |g| - expected |
  double addressed_residual = 0.0; // deviation from g * I, wrong cavity leaks
  double max_off_target = 0.0;     // couplings of the other +-2k modes
  std::vector<ModeCavityCoupling> couplings;

  bool pass(double tolerance = 1e-10) const {
    return coupling_error <= tolerance && addressed_residual <= tolerance &&
           max_off_target <= tolerance;
  }
};

namespace detail {

inline Matrix cavity_block(const QuadraticHamiltonian& ham,
                           const ModeLabel& cavity, const ModeLabel& mode) {
  const auto row = static_cast<long>(ham.registry.x_index(cavity));
  const auto col = static_cast<long>(ham.registry.x_index(mode));
  return ham.form.block(row, col, 2, 2);
}

}  // namespace detail

/// Conjugate step `step` of `spec` into the squeezed frame and check that
/// exactly the addressed +-2k mode couples to exactly the designed cavity,
/// as a beamsplitter with the designed rate.
inline DecouplingReport verify_step_decoupling(const ProtocolSpec& spec,
                                               int step) {
  const StepParameters params = resolve_step_parameters(spec, step);
  const ModeRegistry registry = spec.registry();
  const QuadraticHamiltonian lab = effective_hamiltonian(registry, params.laser);
  const QuadraticHamiltonian framed =
      conjugate_hamiltonian(lab, analysis_transform(spec));

  std::vector<ModeLabel> pair_modes;
  for (int n = 1; n <= spec.n_ensembles(); ++n) {
    pair_modes.push_back(ModeLabel::collective(n, 2));
    pair_modes.push_back(ModeLabel::collective(n, -2));
  }
  const ModeLabel other_cavity = params.cavity == ModeLabel::cavity_plus()
                                     ? ModeLabel::cavity_minus()
                                     : ModeLabel::cavity_plus();

  DecouplingReport report;
  report.step_index = step;
  report.addressed = params.addressed;
  report.expected_coupling = params.coupling;
  for (const auto& mode : pair_modes) {
    const Matrix to_cavity = detail::cavity_block(framed, params.cavity, mode);
    const Matrix to_other = detail::cavity_block(framed, other_cavity, mode);
    const double norm = std::max(to_cavity.cwiseAbs().maxCoeff(),
                                 to_other.cwiseAbs().maxCoeff());
    report.couplings.push_back({mode, norm});
    if (mode == params.addressed) {
      const double fitted = 0.5 * (to_cavity(0, 0) + to_cavity(1, 1));
      report.coupling = std::abs(fitted);
      report.coupling_error = std::abs(report.coupling - params.coupling);
      report.addressed_residual = std::max(
          (to_cavity - fitted * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(),
          to_other.cwiseAbs().maxCoeff());
    } else {
      report.max_off_target = std::max(report.max_off_target, norm);
    }
  }
  return report;
}

/// Zero out, on a copy, everything except the rows/columns of `keep`, and
/// return the quadratic form restricted to those modes. Couplings between
/// kept and dropped modes are discarded; measure them first with
/// coupling_to_complement if the restriction is meant to be exact.
inline QuadraticHamiltonian restricted_hamiltonian(
    const QuadraticHamiltonian& ham, const std::vector<ModeLabel>& keep) {
  ModeRegistry reduced{std::vector<ModeLabel>(keep.begin(), keep.end())};
  const auto dim = static_cast<long>(2 * keep.size());
  Matrix form(dim, dim);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    for (std::size_t j = 0; j < keep.size(); ++j) {
      form.block(2 * static_cast<long>(i), 2 * static_cast<long>(j), 2, 2) =
          ham.form.block(static_cast<long>(ham.registry.x_index(keep[i])),
                         static_cast<long>(ham.registry.x_index(keep[j])), 2,
                         2);
    }
  }
  return QuadraticHamiltonian{std::move(reduced), std::move(form),
                              OperatorExpr{}};
}

/// Largest quadratic-form entry coupling `keep` to the remaining modes.
inline double coupling_to_complement(const QuadraticHamiltonian& ham,
                                     const std::vector<ModeLabel>& keep) {
  double worst = 0.0;
  for (const auto& kept : keep) {
    const auto row = static_cast<long>(ham.registry.x_index(kept));
    for (const auto& label : ham.registry.labels()) {
      if (std::find(keep.begin(), keep.end(), label) != keep.end()) continue;
      const auto col = static_cast<long>(ham.registry.x_index(label));
      worst = std::max(worst,
                       ham.form.block(row, col, 2, 2).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// State functionals
// ---------------------------------------------------------------------------

/// Uhlmann fidelity F = tr(rho tau) for Gaussian states where at least one
/// side is pure:
///   F = exp(-(1/2) d^T (s1 + s2)^{-1} d) / sqrt(det(s1 + s2)).
inline double fidelity(const GaussianState& a, const GaussianState& b) {
  if (a.registry() != b.registry()) {
    throw ModeError("fidelity needs matching registries: " +
                    a.registry().str() + " vs " + b.registry().str());
  }
  const double best_purity = std::max(purity(a), purity(b));
  if (best_purity < 1.0 - 1e-6) {
    throw Error("fidelity requires a pure reference state (best purity " +
                std::to_string(best_purity) + ")");
  }
  const Matrix total = a.covariance() + b.covariance();
  const Vector delta = a.mean() - b.mean();
  const double det = total.determinant();
  if (det <= 0.0) {
    throw PhysicalityError("covariance sum has nonpositive determinant");
  }
  const double exponent = -0.5 * delta.dot(total.llt().solve(delta));
  return std::exp(exponent) / std::sqrt(det);
}

/// Logarithmic negativity of the bipartition (party_a | rest): partial
/// transpose flips the momenta of the complement; E_N sums -log2(2 nu) over
/// symplectic eigenvalues nu < 1/2 of the transposed covariance.
inline double log_negativity(const GaussianState& state,
                             const std::vector<ModeLabel>& party_a) {
  if (party_a.empty() || party_a.size() >= state.n_modes()) {
    throw ModeError("bipartition needs a proper nonempty subset of modes");
  }
  const auto dim = static_cast<long>(state.registry().dim());
  Matrix flip = Matrix::Identity(dim, dim);
  for (const auto& label : state.registry().labels()) {
    if (std::find(party_a.begin(), party_a.end(), label) == party_a.end()) {
      const auto p = static_cast<long>(state.registry().p_index(label));
      flip(p, p) = -1.0;
    }
  }
  const Matrix transposed = flip * state.covariance() * flip;
  double total = 0.0;
  for (double nu : symplectic_eigenvalues(transposed)) {
    if (nu < 0.5) total += -std::log2(2.0 * nu);
  }
  return total;
}

enum class Quadrature { X, P };

inline double quadrature_variance(const GaussianState& state,
                                  const ModeLabel& mode, Quadrature q) {
  return state.variance(q == Quadrature::X ? state.registry().x_index(mode)
                                           : state.registry().p_index(mode));
}

/// Var((q_a + sign * q_b)/sqrt(2)) for q = x or p of two modes.
inline double pair_quadrature_variance(const GaussianState& state,
                                       const ModeLabel& a, const ModeLabel& b,
                                       Quadrature q, double sign) {
  const auto dim = static_cast<long>(state.registry().dim());
  Vector v = Vector::Zero(dim);
  const double w = 1.0 / std::sqrt(2.0);
  if (q == Quadrature::X) {
    v[static_cast<long>(state.registry().x_index(a))] = w;
    v[static_cast<long>(state.registry().x_index(b))] = sign * w;
  } else {
    v[static_cast<long>(state.registry().p_index(a))] = w;
    v[static_cast<long>(state.registry().p_index(b))] = sign * w;
  }
  return v.dot(state.covariance() * v);
}

// ---------------------------------------------------------------------------
// Protocol execution
// ---------------------------------------------------------------------------

/// Modes whose joint state carries the protocol's figure of merit: the
/// whole registry for OneTwoMode, the +-2k sector for FourMode (whose C0
/// modes reach a stationary squeezed state that is not part of the
/// four-mode target).
inline std::vector<ModeLabel> merit_modes(const ProtocolSpec& spec) {
  if (spec.kind == ProtocolKind::OneTwoMode) {
    return spec.registry().labels();
  }
  return {ModeLabel::collective(1, 2), ModeLabel::collective(1, -2),
          ModeLabel::collective(2, 2), ModeLabel::collective(2, -2)};
}

/// The canonical entangled pair whose EPR quadratures the time series
/// tracks: (C2k, C-2k) of ensemble 1 for OneTwoMode, the cross-ensemble
/// pair (C2k(1), C-2k(2)) for FourMode.
inline std::pair<ModeLabel, ModeLabel> epr_pair(const ProtocolSpec& spec) {
  if (spec.kind == ProtocolKind::OneTwoMode) {
    return {ModeLabel::collective(1, 2), ModeLabel::collective(1, -2)};
  }
  return {ModeLabel::collective(1, 2), ModeLabel::collective(2, -2)};
}

/// Fidelity between the merit sectors of `state` and the target.
inline double sector_fidelity(const ProtocolSpec& spec,
                              const GaussianState& state,
                              const GaussianState& target) {
  const auto sector = merit_modes(spec);
  return fidelity(partial_state(state, sector), partial_state(target, sector));
}

/// One sampled point of the time series.
struct SeriesRow {
  double time = 0.0;
  double var_x_c0 = 0.0;
  double var_p_c0 = 0.0;
  double var_epr_x = 0.0;  // Var((x_a + x_b)/sqrt 2) of the tracked pair
  double var_epr_p = 0.0;  // Var((p_a - p_b)/sqrt 2)
  double fidelity = 0.0;   // merit-sector fidelity to the target
  double purity = 0.0;     // merit-sector purity
  double n_cavity_plus = 0.0;
  double n_cavity_minus = 0.0;
};

/// Everything recorded about one executed step.
struct StepRecord {
  StepParameters params;
  DecouplingReport decoupling;
  std::vector<Complex> spectrum;    // lab-frame drift eigenvalues
  double stationarity = 0.0;        // ||A s + s A^T + D||_max / kappa at end
  double fidelity_after = 0.0;
  double purity_after = 0.0;
};

/// Final figures of merit.
struct ProtocolMetrics {
  double fidelity = 0.0;         // merit-sector fidelity to the target
  double sector_purity = 0.0;
  double log_negativity = 0.0;
  double target_log_negativity = 0.0;
  double var_x_c0 = 0.0;
  double target_var_x_c0 = 0.0;
  double var_epr_x = 0.0;
  double var_epr_p = 0.0;
  double target_var_epr_x = 0.0;
  double target_var_epr_p = 0.0;
  double cavity_deviation = 0.0;  // worst covariance-row deviation from vacuum
  double frame_vacuum_fidelity = 0.0;
  double final_stationarity = 0.0;
};

struct ProtocolResult {
  ProtocolSpec spec;
  GaussianState final_state;
  GaussianState target;
  std::vector<StepRecord> steps;
  std::vector<SeriesRow> series;
  ProtocolMetrics metrics;
};

struct ProtocolOptions {
  /// Permutation of 0..n_steps-1; empty means natural order.
  std::vector<int> step_order;
};

namespace detail {

inline double cavity_vacuum_deviation(const GaussianState& state) {
  const auto dim = static_cast<long>(state.registry().dim());
  double worst = 0.0;
  for (const ModeLabel& cavity :
       {ModeLabel::cavity_plus(), ModeLabel::cavity_minus()}) {
    for (long row :
         {static_cast<long>(state.registry().x_index(cavity)),
          static_cast<long>(state.registry().p_index(cavity))}) {
      for (long col = 0; col < dim; ++col) {
        const double vac = row == col ? 0.5 : 0.0;
        worst = std::max(worst, std::abs(state.covariance()(row, col) - vac));
      }
      worst = std::max(worst, std::abs(state.mean()[row]));
    }
  }
  return worst;
}

inline SeriesRow make_series_row(const ProtocolSpec& spec, double time,
                                 const GaussianState& state,
                                 const GaussianState& target) {
  const ModeLabel c0 = ModeLabel::collective(1, 0);
  const auto [pa, pb] = epr_pair(spec);
  SeriesRow row;
  row.time = time;
  row.var_x_c0 = quadrature_variance(state, c0, Quadrature::X);
  row.var_p_c0 = quadrature_variance(state, c0, Quadrature::P);
  row.var_epr_x = pair_quadrature_variance(state, pa, pb, Quadrature::X, 1.0);
  row.var_epr_p = pair_quadrature_variance(state, pa, pb, Quadrature::P, -1.0);
  row.fidelity = sector_fidelity(spec, state, target);
  row.purity = purity(partial_state(state, merit_modes(spec)));
  row.n_cavity_plus = state.photon_number(ModeLabel::cavity_plus());
  row.n_cavity_minus = state.photon_number(ModeLabel::cavity_minus());
  return row;
}

}  // namespace detail

/// Run the whole protocol from vacuum: resolve each step, verify its
/// frame decoupling, evolve the lossy dynamics for the step duration
/// (sampling `samples_per_step` intermediate points), and score the final
/// state against the target.
inline ProtocolResult run_protocol(const ProtocolSpec& spec,
                                   const ProtocolOptions& options = {}) {
  spec.validate();
  const ModeRegistry registry = spec.registry();
  const GaussianState target = target_state(spec);
  const SymplecticTransform frame = analysis_transform(spec);

  std::vector<int> order(static_cast<std::size_t>(spec.n_steps()));
  if (options.step_order.empty()) {
    for (int i = 0; i < spec.n_steps(); ++i) order[static_cast<std::size_t>(i)] = i;
  } else {
    order = options.step_order;
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < spec.n_steps(); ++i) {
      if (i >= static_cast<int>(sorted.size()) ||
          sorted[static_cast<std::size_t>(i)] != i) {
        throw Error("step_order must be a permutation of 0.." +
                    std::to_string(spec.n_steps() - 1));
      }
    }
  }

  const std::vector<ModeLabel> cavities{ModeLabel::cavity_plus(),
                                        ModeLabel::cavity_minus()};
  GaussianState state = vacuum_state(registry);
  ProtocolResult result{spec, state, target, {}, {}, {}};
  result.series.push_back(detail::make_series_row(spec, 0.0, state, target));

  double time = 0.0;
  double last_stationarity = 0.0;
  for (int step : order) {
    const StepParameters params = resolve_step_parameters(spec, step);
    const QuadraticHamiltonian ham =
        effective_hamiltonian(registry, params.laser);
    const DriftDiffusion dynamics =
        drift_diffusion(ham, cavities, spec.kappa);

    StepRecord record{params, verify_step_decoupling(spec, step),
                      drift_spectrum(dynamics), 0.0, 0.0, 0.0};

    const int samples = std::max(1, spec.samples_per_step);
    const double dt = params.duration / samples;
    for (int s = 0; s < samples; ++s) {
      state = evolve(state, dynamics, dt);
      time += dt;
      result.series.push_back(
          detail::make_series_row(spec, time, state, target));
    }
    record.stationarity =
        stationarity_residual(dynamics, state) / spec.kappa;
    record.fidelity_after = result.series.back().fidelity;
    record.purity_after = result.series.back().purity;
    last_stationarity = record.stationarity;
    result.steps.push_back(std::move(record));
  }

  result.final_state = state;

  ProtocolMetrics& m = result.metrics;
  const auto sector = merit_modes(spec);
  const auto [pa, pb] = epr_pair(spec);
  const ModeLabel c0 = ModeLabel::collective(1, 0);
  m.fidelity = sector_fidelity(spec, state, target);
  m.sector_purity = purity(partial_state(state, sector));
  const std::vector<ModeLabel> party_a =
      spec.kind == ProtocolKind::OneTwoMode
          ? std::vector<ModeLabel>{ModeLabel::collective(1, 2)}
          : std::vector<ModeLabel>{ModeLabel::collective(1, 2),
                                   ModeLabel::collective(1, -2)};
  m.log_negativity = log_negativity(partial_state(state, sector), party_a);
  m.target_log_negativity =
      log_negativity(partial_state(target, sector), party_a);
  m.var_x_c0 = quadrature_variance(state, c0, Quadrature::X);
  m.target_var_x_c0 = quadrature_variance(target, c0, Quadrature::X);
  m.var_epr_x = pair_quadrature_variance(state, pa, pb, Quadrature::X, 1.0);
  m.var_epr_p = pair_quadrature_variance(state, pa, pb, Quadrature::P, -1.0);
  m.target_var_epr_x =
      pair_quadrature_variance(target, pa, pb, Quadrature::X, 1.0);
  m.target_var_epr_p =
      pair_quadrature_variance(target, pa, pb, Quadrature::P, -1.0);
  m.cavity_deviation = detail::cavity_vacuum_deviation(state);
  const GaussianState framed = apply_symplectic(state, frame);
  if (spec.kind == ProtocolKind::OneTwoMode) {
    m.frame_vacuum_fidelity = fidelity(framed, vacuum_state(registry));
  } else {
    const GaussianState framed_sector = partial_state(framed, sector);
    m.frame_vacuum_fidelity =
        fidelity(framed_sector, vacuum_state(framed_sector.registry()));
  }
  m.final_stationarity = last_stationarity;
  return result;
}

}  // namespace ringcv
