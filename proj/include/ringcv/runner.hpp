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

// Command implementations behind the CLI. Every command loads one JSON
// config, runs, writes a report bundle (summary JSON + CSV tables) under
// the output directory, prints a one-line status, and returns a process
// exit code:
//   0  success, all checks passed
//   1  ran, but a quality threshold was not met (or an unclassified error)
//   2  malformed configuration
//   3  dynamically unstable request (StabilityError / NotHurwitzError)
//   4  unphysical state encountered
//   5  number-basis truncation overflow

#include <algorithm>
#include <cstdio>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ringcv/config.hpp"
#include "ringcv/core.hpp"
#include "ringcv/fock.hpp"
#include "ringcv/hamiltonian.hpp"
#include "ringcv/lindblad.hpp"
#include "ringcv/modes.hpp"
#include "ringcv/protocol.hpp"
#include "ringcv/report.hpp"
#include "ringcv/squeezers.hpp"
#include "ringcv/version.hpp"

namespace ringcv {

inline constexpr int kExitOk = 0;
inline constexpr int kExitBelowThreshold = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitStability = 3;
inline constexpr int kExitPhysicality = 4;
inline constexpr int kExitTruncation = 5;

struct RunnerOptions {
  std::string out_dir = "out";
  bool no_timestamp = false;
  std::optional<double> threshold;  // overrides fidelity/oracle thresholds
};

namespace detail {

inline Json base_summary(const std::string& command, const Json& config_echo) {
  Json summary;
  summary["artifact"] = {{"name", "ringcv"}, {"version", kVersionString}};
  summary["command"] = command;
  summary["config"] = config_echo;
  return summary;
}

inline Json spectrum_json(const std::vector<Complex>& spectrum) {
  Json out = Json::array();
  for (const auto& z : spectrum) {
    out.push_back({{"re", z.real()}, {"im", z.imag()}});
  }
  return out;
}

inline Json matrix_json(const Matrix& m) {
  Json out = Json::array();
  for (long i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (long j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

inline std::vector<std::string> quadrature_names(const ModeRegistry& registry) {
  std::vector<std::string> names;
  names.reserve(registry.dim());
  for (const auto& label : registry.labels()) {
    names.push_back("x_" + label.str());
    names.push_back("p_" + label.str());
  }
  return names;
}

inline Json check_json(const std::string& name, bool pass, double value,
                       double threshold) {
  return Json{{"name", name},
              {"pass", pass},
              {"value", value},
              {"threshold", threshold}};
}

/// A built damped bilinear system plus its JSON description.
struct BuiltSystem {
  ModeRegistry registry;
  QuadraticHamiltonian hamiltonian;
  std::vector<ModeLabel> damped;
  Json description;
};

inline BuiltSystem build_system(const RunConfig& config) {
  if (!config.system) {
    throw ConfigError("this command requires a \"system\" block");
  }
  const SystemConfig& sys = *config.system;
  if (sys.type == "two_mode_mixer") {
    ModeRegistry registry({ModeLabel::cavity_plus(),
                           ModeLabel::collective(1, 0)});
    auto ham = mixer_hamiltonian(registry, ModeLabel::cavity_plus(),
                                 ModeLabel::collective(1, 0), sys.g);
    Json desc{{"type", sys.type}, {"g", sys.g}, {"modes", registry.str()}};
    return {registry, std::move(ham), {ModeLabel::cavity_plus()},
            std::move(desc)};
  }
  if (sys.type == "squeezer_mixer") {
    ModeRegistry registry({ModeLabel::cavity_plus(),
                           ModeLabel::collective(1, 0)});
    auto ham = squeezer_mixer_hamiltonian(registry, ModeLabel::cavity_plus(),
                                          ModeLabel::collective(1, 0),
                                          sys.beta_u, sys.beta_s);
    Json desc{{"type", sys.type},
              {"beta_u", sys.beta_u},
              {"beta_s", sys.beta_s},
              {"modes", registry.str()}};
    return {registry, std::move(ham), {ModeLabel::cavity_plus()},
            std::move(desc)};
  }
  if (sys.type == "laser") {
    const int ensembles = static_cast<int>(sys.drives.size());
    ModeRegistry registry = ModeRegistry::canonical(ensembles);
    LaserConfig laser{sys.direction, sys.drives};
    auto ham = effective_hamiltonian(registry, laser);
    Json desc{{"type", sys.type},
              {"direction", to_string(sys.direction)},
              {"ensembles", ensembles},
              {"modes", registry.str()}};
    return {registry,
            std::move(ham),
            {ModeLabel::cavity_plus(), ModeLabel::cavity_minus()},
            std::move(desc)};
  }
  if (sys.type == "transformed_step") {
    const ProtocolSpec& spec = *config.protocol;  // presence checked at parse
    const StepParameters params = resolve_step_parameters(spec, sys.step);
    ModeRegistry registry = spec.registry();
    auto lab = effective_hamiltonian(registry, params.laser);
    auto framed = conjugate_hamiltonian(lab, analysis_transform(spec));
    Json desc{{"type", sys.type},
              {"protocol", to_string(spec.kind)},
              {"step", sys.step},
              {"addressed", params.addressed.str()},
              {"modes", registry.str()}};
    return {registry,
            std::move(framed),
            {ModeLabel::cavity_plus(), ModeLabel::cavity_minus()},
            std::move(desc)};
  }
  throw ConfigError("unsupported system type \"" + sys.type + "\"");
}

inline GaussianState initial_state(const BuiltSystem& system,
                                   const InitialStateConfig& initial) {
  if (initial.type == "vacuum") return vacuum_state(system.registry);
  if (initial.type == "thermal") {
    const auto dim = static_cast<long>(system.registry.dim());
    return GaussianState(
        system.registry, Vector::Zero(dim),
        (initial.occupation + 0.5) * Matrix::Identity(dim, dim));
  }
  // "squeezed"
  const ModeLabel mode = parse_mode_label(initial.mode);
  if (!system.registry.contains(mode)) {
    throw ConfigError("initial-state mode " + mode.str() +
                      " is not part of the system " + system.registry.str());
  }
  return apply_symplectic(
      vacuum_state(system.registry),
      single_mode_squeezer(system.registry, mode, initial.xi));
}

inline Json state_json(const GaussianState& state) {
  Json photons = Json::object();
  for (const auto& label : state.registry().labels()) {
    photons[label.str()] = state.photon_number(label);
  }
  Json nus = Json::array();
  for (double nu : symplectic_eigenvalues(state)) nus.push_back(nu);
  return Json{{"modes", state.registry().str()},
              {"purity", purity(state)},
              {"photon_numbers", photons},
              {"symplectic_eigenvalues", nus}};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// protocol
// ---------------------------------------------------------------------------

inline int cmd_protocol(const RunConfig& config, const RunnerOptions& options) {
  if (!config.protocol) {
    throw ConfigError("the protocol command requires a \"protocol\" block");
  }
  ProtocolSpec spec = *config.protocol;
  if (options.threshold) spec.fidelity_threshold = *options.threshold;

  const ProtocolResult result = run_protocol(spec);

  Json summary = detail::base_summary("protocol", config.raw);
  Json resolved = Json::array();
  Json steps = Json::array();
  for (const auto& step : result.steps) {
    Json params = Json::array();
    for (const auto& p : step.params.resolved) {
      params.push_back(
          {{"name", p.name}, {"value", p.value}, {"source", p.source}});
    }
    resolved.push_back({{"step", step.params.index},
                        {"direction", to_string(step.params.direction)},
                        {"addressed", step.params.addressed.str()},
                        {"cavity", step.params.cavity.str()},
                        {"duration", step.params.duration},
                        {"parameters", std::move(params)}});
    steps.push_back(
        {{"step", step.params.index},
         {"addressed", step.params.addressed.str()},
         {"coupling", step.decoupling.coupling},
         {"expected_coupling", step.decoupling.expected_coupling},
         {"coupling_error", step.decoupling.coupling_error},
         {"addressed_residual", step.decoupling.addressed_residual},
         {"max_off_target", step.decoupling.max_off_target},
         {"spectral_abscissa", step.spectrum.front().real()},
         {"stationarity", step.stationarity},
         {"fidelity_after", step.fidelity_after},
         {"purity_after", step.purity_after}});
  }
  summary["resolved_parameters"] = std::move(resolved);
  summary["steps"] = std::move(steps);

  const ProtocolMetrics& m = result.metrics;
  summary["metrics"] = {{"fidelity", m.fidelity},
                        {"sector_purity", m.sector_purity},
                        {"log_negativity", m.log_negativity},
                        {"target_log_negativity", m.target_log_negativity},
                        {"var_x_c0", m.var_x_c0},
                        {"target_var_x_c0", m.target_var_x_c0},
                        {"var_epr_x", m.var_epr_x},
                        {"var_epr_p", m.var_epr_p},
                        {"target_var_epr_x", m.target_var_epr_x},
                        {"target_var_epr_p", m.target_var_epr_p},
                        {"cavity_deviation", m.cavity_deviation},
                        {"frame_vacuum_fidelity", m.frame_vacuum_fidelity},
                        {"final_stationarity", m.final_stationarity}};

  const bool pass = m.fidelity >= spec.fidelity_threshold;
  double worst_decoupling = 0.0;
  for (const auto& step : result.steps) {
    worst_decoupling = std::max(
        {worst_decoupling, step.decoupling.coupling_error,
         step.decoupling.addressed_residual, step.decoupling.max_off_target});
  }
  summary["checks"] = Json::array(
      {detail::check_json("fidelity_threshold", pass, m.fidelity,
                          spec.fidelity_threshold),
       detail::check_json("frame_decoupling", worst_decoupling <= 1e-9,
                          worst_decoupling, 1e-9)});
  summary["status"] = pass ? "ok" : "below_threshold";
  summary["exit_code"] = pass ? kExitOk : kExitBelowThreshold;

  CsvTable series{"series",
                  {"time", "var_x_c0", "var_p_c0", "var_epr_x", "var_epr_p",
                   "fidelity", "purity", "n_cavity_plus", "n_cavity_minus"},
                  {}};
  for (const auto& row : result.series) {
    series.rows.push_back({row.time, row.var_x_c0, row.var_p_c0,
                           row.var_epr_x, row.var_epr_p, row.fidelity,
                           row.purity, row.n_cavity_plus, row.n_cavity_minus});
  }

  const std::string path = write_report(
      ReportBundle{"protocol", std::move(summary), {std::move(series)}},
      options.out_dir, !options.no_timestamp);
  std::printf("[protocol] status=%s fidelity=%.6f threshold=%.6f -> %s\n",
              pass ? "ok" : "below_threshold", m.fidelity,
              spec.fidelity_threshold, path.c_str());
  return pass ? kExitOk : kExitBelowThreshold;
}

// ---------------------------------------------------------------------------
// steady-state
// ---------------------------------------------------------------------------

inline int cmd_steady_state(const RunConfig& config,
                            const RunnerOptions& options) {
  const detail::BuiltSystem system = detail::build_system(config);
  const DriftDiffusion dynamics =
      drift_diffusion(system.hamiltonian, system.damped, config.kappa);
  const GaussianState state = steady_state(dynamics);

  Json summary = detail::base_summary("steady-state", config.raw);
  summary["system"] = system.description;
  summary["spectrum"] = detail::spectrum_json(drift_spectrum(dynamics));
  summary["spectral_abscissa"] = spectral_abscissa(dynamics);
  summary["convergence_time"] = convergence_time(dynamics);
  summary["state"] = detail::state_json(state);
  summary["stationarity"] = stationarity_residual(dynamics, state);
  summary["covariance"] = detail::matrix_json(state.covariance());
  summary["status"] = "ok";
  summary["exit_code"] = kExitOk;

  CsvTable cov{"covariance", detail::quadrature_names(system.registry), {}};
  for (long i = 0; i < state.covariance().rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(state.covariance().cols()));
    for (long j = 0; j < state.covariance().cols(); ++j) {
      row[static_cast<std::size_t>(j)] = state.covariance()(i, j);
    }
    cov.rows.push_back(std::move(row));
  }

  const std::string path = write_report(
      ReportBundle{"steady_state", std::move(summary), {std::move(cov)}},
      options.out_dir, !options.no_timestamp);
  std::printf("[steady-state] status=ok purity=%.6f -> %s\n", purity(state),
              path.c_str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// evolve
// ---------------------------------------------------------------------------

inline int cmd_evolve(const RunConfig& config, const RunnerOptions& options) {
  if (!config.evolve) {
    throw ConfigError("the evolve command requires an \"evolve\" block");
  }
  const detail::BuiltSystem system = detail::build_system(config);
  const DriftDiffusion dynamics =
      drift_diffusion(system.hamiltonian, system.damped, config.kappa);
  GaussianState state = detail::initial_state(system, config.evolve->initial);

  CsvTable series{"series", {"time"}, {}};
  for (const auto& label : system.registry.labels()) {
    series.header.push_back("n_" + label.str());
  }
  series.header.push_back("purity");

  const auto record = [&](double time, const GaussianState& s) {
    std::vector<double> row{time};
    for (const auto& label : system.registry.labels()) {
      row.push_back(s.photon_number(label));
    }
    row.push_back(purity(s));
    series.rows.push_back(std::move(row));
  };

  record(0.0, state);
  const int samples = std::max(1, config.evolve->samples);
  const double dt = config.evolve->time / samples;
  for (int s = 0; s < samples; ++s) {
    state = evolve(state, dynamics, dt);
    record(dt * (s + 1), state);
  }

  Json summary = detail::base_summary("evolve", config.raw);
  summary["system"] = system.description;
  summary["time"] = config.evolve->time;
  summary["state"] = detail::state_json(state);
  summary["stationarity"] = stationarity_residual(dynamics, state);
  summary["covariance"] = detail::matrix_json(state.covariance());
  summary["status"] = "ok";
  summary["exit_code"] = kExitOk;

  const std::string path = write_report(
      ReportBundle{"evolve", std::move(summary), {std::move(series)}},
      options.out_dir, !options.no_timestamp);
  std::printf("[evolve] status=ok t=%g purity=%.6f -> %s\n",
              config.evolve->time, purity(state), path.c_str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// modes
// ---------------------------------------------------------------------------

inline int cmd_modes(const RunConfig& config, const RunnerOptions& options) {
  if (!config.modes) {
    throw ConfigError("the modes command requires a \"modes\" block");
  }
  const ModesConfig& mc = *config.modes;
  const EnsembleGeometry geometry = EnsembleGeometry::regular_chain(
      static_cast<std::size_t>(mc.atoms), mc.wavenumber, mc.spacing);
  const Eigen::Matrix3cd overlaps = overlap_matrix(geometry);
  const double deficit = orthogonality_deficit(overlaps);
  const double kl = mc.wavenumber * geometry.length();
  const double envelope = kl > 0.0 ? 1.0 / kl : 1.0;
  const bool pass = deficit <= mc.warn_threshold;

  Json summary = detail::base_summary("modes", config.raw);
  summary["geometry"] = {{"atoms", mc.atoms},
                         {"wavenumber", mc.wavenumber},
                         {"spacing", mc.spacing},
                         {"length", geometry.length()},
                         {"k_times_length", kl}};
  Json matrix = Json::array();
  CsvTable table{"overlap", {"order_a", "order_b", "re", "im", "abs"}, {}};
  for (int i = 0; i < 3; ++i) {
    Json row = Json::array();
    for (int j = 0; j < 3; ++j) {
      const Complex z = overlaps(i, j);
      row.push_back({{"re", z.real()}, {"im", z.imag()}});
      table.rows.push_back({double(kCollectiveOrders[static_cast<std::size_t>(i)]),
                            double(kCollectiveOrders[static_cast<std::size_t>(j)]),
                            z.real(), z.imag(), std::abs(z)});
    }
    matrix.push_back(std::move(row));
  }
  summary["overlap_matrix"] = std::move(matrix);
  summary["orthogonality_deficit"] = deficit;
  summary["envelope_bound"] = envelope;
  summary["checks"] = Json::array({detail::check_json(
      "orthogonality_deficit", pass, deficit, mc.warn_threshold)});
  summary["status"] = pass ? "ok" : "below_threshold";
  summary["exit_code"] = pass ? kExitOk : kExitBelowThreshold;

  const std::string path = write_report(
      ReportBundle{"modes", std::move(summary), {std::move(table)}},
      options.out_dir, !options.no_timestamp);
  std::printf("[modes] status=%s deficit=%.3e threshold=%.3e -> %s\n",
              pass ? "ok" : "below_threshold", deficit, mc.warn_threshold,
              path.c_str());
  return pass ? kExitOk : kExitBelowThreshold;
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

inline int cmd_oracle(const RunConfig& config, const RunnerOptions& options) {
  if (!config.oracle) {
    throw ConfigError("the oracle command requires an \"oracle\" block");
  }
  if (!config.system || (config.system->type != "two_mode_mixer" &&
                         config.system->type != "squeezer_mixer")) {
    throw ConfigError(
        "the oracle command needs a small system (two_mode_mixer or "
        "squeezer_mixer)");
  }
  OracleConfig oracle = *config.oracle;
  if (options.threshold) oracle.tolerance = *options.threshold;

  const detail::BuiltSystem system = detail::build_system(config);
  const DriftDiffusion dynamics =
      drift_diffusion(system.hamiltonian, system.damped, config.kappa);
  const OperatorExpr& terms = system.hamiltonian.terms;
  const FockSpace space(system.registry, oracle.cutoff);

  FockDensity rho = FockDensity::vacuum(space);
  GaussianState gauss = vacuum_state(system.registry);

  Json points = Json::array();
  CsvTable table{"deviations",
                 {"time", "max_cov_deviation", "max_mean_deviation",
                  "trace_error"},
                 {}};
  bool all_pass = true;
  double previous = 0.0;
  for (double time : oracle.times) {
    rho = evolve_fock(rho, terms, system.damped, config.kappa,
                      time - previous);
    gauss = evolve(gauss, dynamics, time - previous);
    previous = time;

    const FockMoments moments = covariance_from_density(rho);
    const double cov_dev =
        (moments.covariance - gauss.covariance()).cwiseAbs().maxCoeff();
    const double mean_dev =
        (moments.mean - gauss.mean()).cwiseAbs().maxCoeff();
    const double trace_error = std::abs(rho.trace() - 1.0);
    const bool pass = cov_dev <= oracle.tolerance;
    all_pass = all_pass && pass;
    points.push_back({{"time", time},
                      {"max_cov_deviation", cov_dev},
                      {"max_mean_deviation", mean_dev},
                      {"trace_error", trace_error},
                      {"pass", pass}});
    table.rows.push_back({time, cov_dev, mean_dev, trace_error});
  }

  Json summary = detail::base_summary("oracle", config.raw);
  summary["system"] = system.description;
  summary["cutoff"] = oracle.cutoff;
  summary["tolerance"] = oracle.tolerance;
  summary["points"] = std::move(points);
  summary["status"] = all_pass ? "ok" : "below_threshold";
  summary["exit_code"] = all_pass ? kExitOk : kExitBelowThreshold;

  const std::string path = write_report(
      ReportBundle{"oracle", std::move(summary), {std::move(table)}},
      options.out_dir, !options.no_timestamp);
  std::printf("[oracle] status=%s tolerance=%.3e -> %s\n",
              all_pass ? "ok" : "below_threshold", oracle.tolerance,
              path.c_str());
  return all_pass ? kExitOk : kExitBelowThreshold;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

namespace detail {

struct SweepPoint {
  Json summary;
  std::vector<double> row;
  bool has_row = false;
};

inline SweepPoint run_sweep_point(const Json& raw, const SweepConfig& sweep,
                                  double value) {
  SweepPoint point;
  point.summary["value"] = value;
  try {
    Json patched = raw;
    patched[Json::json_pointer(sweep.pointer)] = value;
    patched.erase("sweep");
    const RunConfig config = parse_config(patched);
    if (sweep.command == "protocol") {
      if (!config.protocol) {
        throw ConfigError("sweep target config lacks a protocol block");
      }
      const ProtocolResult result = run_protocol(*config.protocol);
      const bool pass =
          result.metrics.fidelity >= config.protocol->fidelity_threshold;
      point.summary["status"] = pass ? "ok" : "below_threshold";
      point.summary["fidelity"] = result.metrics.fidelity;
      point.summary["sector_purity"] = result.metrics.sector_purity;
      point.summary["log_negativity"] = result.metrics.log_negativity;
      point.row = {value, result.metrics.fidelity,
                   result.metrics.sector_purity,
                   result.metrics.log_negativity};
      point.has_row = true;
    } else if (sweep.command == "steady-state") {
      const BuiltSystem system = build_system(config);
      const GaussianState state = steady_state(
          drift_diffusion(system.hamiltonian, system.damped, config.kappa));
      point.summary["status"] = "ok";
      point.summary["purity"] = purity(state);
      point.row = {value, purity(state)};
      point.has_row = true;
    } else {  // evolve
      if (!config.evolve) {
        throw ConfigError("sweep target config lacks an evolve block");
      }
      const BuiltSystem system = build_system(config);
      const DriftDiffusion dynamics =
          drift_diffusion(system.hamiltonian, system.damped, config.kappa);
      GaussianState state = initial_state(system, config.evolve->initial);
      state = evolve(state, dynamics, config.evolve->time);
      point.summary["status"] = "ok";
      point.summary["purity"] = purity(state);
      point.row = {value, purity(state)};
      point.has_row = true;
    }
  } catch (const ConfigError& e) {
    point.summary["status"] = "config_error";
    point.summary["error"] = e.what();
  } catch (const NotHurwitzError& e) {
    point.summary["status"] = "not_hurwitz";
    point.summary["error"] = e.what();
  } catch (const StabilityError& e) {
    point.summary["status"] = "stability_rejected";
    point.summary["error"] = e.what();
  } catch (const TruncationError& e) {
    point.summary["status"] = "truncation_overflow";
    point.summary["error"] = e.what();
  } catch (const Error& e) {
    point.summary["status"] = "error";
    point.summary["error"] = e.what();
  }
  return point;
}

}  // namespace detail

/// Run one command over a list of values patched into the config at a JSON
/// pointer, in parallel. The sweep succeeds (exit 0) when every point was
/// evaluated and reported; individual unstable or below-threshold points
/// are flagged in the report, not fatal.
inline int cmd_sweep(const RunConfig& config, const RunnerOptions& options) {
  if (!config.sweep) {
    throw ConfigError("the sweep command requires a \"sweep\" block");
  }
  const SweepConfig& sweep = *config.sweep;

  const int hardware =
      std::max(1u, std::thread::hardware_concurrency());
  const int workers =
      std::min<int>(sweep.workers > 0 ? sweep.workers : hardware,
                    static_cast<int>(sweep.values.size()));

  std::vector<detail::SweepPoint> points(sweep.values.size());
  std::size_t next = 0;
  while (next < sweep.values.size()) {
    const std::size_t batch =
        std::min<std::size_t>(static_cast<std::size_t>(workers),
                              sweep.values.size() - next);
    std::vector<std::future<detail::SweepPoint>> futures;
    futures.reserve(batch);
    for (std::size_t b = 0; b < batch; ++b) {
      const double value = sweep.values[next + b];
      futures.push_back(std::async(std::launch::async, [&, value] {
        return detail::run_sweep_point(config.raw, sweep, value);
      }));
    }
    for (std::size_t b = 0; b < batch; ++b) {
      points[next + b] = futures[b].get();
    }
    next += batch;
  }

  Json point_array = Json::array();
  CsvTable table{"sweep", {}, {}};
  if (sweep.command == "protocol") {
    table.header = {"value", "fidelity", "sector_purity", "log_negativity"};
  } else {
    table.header = {"value", "purity"};
  }
  int flagged = 0;
  for (auto& point : points) {
    if (point.summary["status"] != "ok") ++flagged;
    if (point.has_row) table.rows.push_back(point.row);
    point_array.push_back(std::move(point.summary));
    const auto& last = point_array.back();
    std::printf("[sweep] %s=%g status=%s\n", sweep.pointer.c_str(),
                last["value"].get<double>(),
                last["status"].get<std::string>().c_str());
  }

  Json summary = detail::base_summary("sweep", config.raw);
  summary["swept"] = {{"command", sweep.command},
                      {"pointer", sweep.pointer},
                      {"points", sweep.values.size()},
                      {"workers", workers},
                      {"flagged", flagged}};
  summary["points"] = std::move(point_array);
  summary["status"] = "ok";
  summary["exit_code"] = kExitOk;

  const std::string path = write_report(
      ReportBundle{"sweep", std::move(summary), {std::move(table)}},
      options.out_dir, !options.no_timestamp);
  std::printf("[sweep] status=ok points=%zu flagged=%d -> %s\n",
              sweep.values.size(), flagged, path.c_str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

namespace detail {

inline int write_failure(const std::string& command,
                         const RunnerOptions& options, const Json& echo,
                         const std::string& status, const std::string& error,
                         int exit_code) {
  Json summary = base_summary(command, echo);
  summary["status"] = status;
  summary["error"] = error;
  summary["exit_code"] = exit_code;
  try {
    write_report(ReportBundle{command == "steady-state" ? "steady_state"
                                                        : command,
                              std::move(summary), {}},
                 options.out_dir, !options.no_timestamp);
  } catch (const Error&) {
    // Reporting must never mask the original failure.
  }
  std::fprintf(stderr, "[%s] status=%s: %s\n", command.c_str(),
               status.c_str(), error.c_str());
  return exit_code;
}

}  // namespace detail

/// Load `config_path` and run `command`, mapping failures to exit codes.
inline int run_command(const std::string& command,
                       const std::string& config_path,
                       const RunnerOptions& options) {
  Json echo;
  try {
    const RunConfig config = load_config(config_path);
    echo = config.raw;
    if (command == "protocol") return cmd_protocol(config, options);
    if (command == "steady-state") return cmd_steady_state(config, options);
    if (command == "evolve") return cmd_evolve(config, options);
    if (command == "modes") return cmd_modes(config, options);
    if (command == "oracle") return cmd_oracle(config, options);
    if (command == "sweep") return cmd_sweep(config, options);
    throw ConfigError("unknown command \"" + command + "\"");
  } catch (const ConfigError& e) {
    return detail::write_failure(command, options, echo, "config_error",
                                 e.what(), kExitConfig);
  } catch (const NotHurwitzError& e) {
    return detail::write_failure(command, options, echo, "not_hurwitz",
                                 e.what(), kExitStability);
  } catch (const StabilityError& e) {
    return detail::write_failure(command, options, echo, "stability_rejected",
                                 e.what(), kExitStability);
  } catch (const TruncationError& e) {
    return detail::write_failure(command, options, echo,
                                 "truncation_overflow", e.what(),
                                 kExitTruncation);
  } catch (const PhysicalityError& e) {
    return detail::write_failure(command, options, echo, "unphysical",
                                 e.what(), kExitPhysicality);
  } catch (const Error& e) {
    return detail::write_failure(command, options, echo, "error", e.what(),
                                 kExitBelowThreshold);
  }
}

}  // namespace ringcv
