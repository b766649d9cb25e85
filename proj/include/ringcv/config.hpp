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

// JSON run configuration. Parsing is strict and total: unknown keys, type
// mismatches and out-of-range values are all collected and reported in one
// ConfigError rather than one at a time. Value constraints that depend on
// the dynamics (drive stability, Hurwitz drift) are *not* config errors;
// they surface later as StabilityError / NotHurwitzError.
//
// All rates share one unit system with `kappa` (radians per second unless
// the user rescales everything consistently); times are in the inverse
// unit.

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ringcv/core.hpp"
#include "ringcv/hamiltonian.hpp"
#include "ringcv/protocol.hpp"

namespace ringcv {

using Json = nlohmann::ordered_json;

/// Malformed configuration; carries every violation found.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}
  explicit ConfigError(const std::string& violation)
      : ConfigError(std::vector<std::string>{violation}) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& violations) {
    std::string out = "invalid configuration:";
    for (const auto& v : violations) out += "\n  - " + v;
    return out;
  }
  std::vector<std::string> violations_;
};

/// Mode-label text format: "a+", "a-", "C0k(1)", "C2k(2)", "C-2k(1)".
inline std::optional<ModeLabel> try_parse_mode_label(const std::string& text) {
  if (text == "a+") return ModeLabel::cavity_plus();
  if (text == "a-") return ModeLabel::cavity_minus();
  // C<order>k(<ensemble>)
  if (text.size() < 6 || text[0] != 'C' || text.back() != ')') {
    return std::nullopt;
  }
  const auto k_pos = text.find("k(");
  if (k_pos == std::string::npos) return std::nullopt;
  const std::string order_text = text.substr(1, k_pos - 1);
  const std::string ensemble_text =
      text.substr(k_pos + 2, text.size() - k_pos - 3);
  int order = 0;
  int ensemble = 0;
  try {
    std::size_t used = 0;
    order = std::stoi(order_text, &used);
    if (used != order_text.size()) return std::nullopt;
    ensemble = std::stoi(ensemble_text, &used);
    if (used != ensemble_text.size()) return std::nullopt;
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if ((order != 0 && order != 2 && order != -2) ||
      (ensemble != 1 && ensemble != 2)) {
    return std::nullopt;
  }
  return ModeLabel::collective(ensemble, order);
}

inline ModeLabel parse_mode_label(const std::string& text) {
  if (auto label = try_parse_mode_label(text)) return *label;
  throw ConfigError("unrecognized mode label \"" + text +
                    "\" (expected a+, a-, or C<0|2|-2>k(<1|2>))");
}

/// Initial state for the `evolve` command.
struct InitialStateConfig {
  std::string type = "vacuum";  // vacuum | thermal | squeezed
  double occupation = 0.0;      // thermal
  double xi = 0.0;              // squeezed
  std::string mode;             // squeezed: which mode
};

struct EvolveConfig {
  double time = 0.0;
  int samples = 0;
  InitialStateConfig initial;
};

/// Which damped bilinear system the system-level commands act on.
struct SystemConfig {
  std::string type;  // laser | two_mode_mixer | squeezer_mixer | transformed_step
  // laser
  PumpDirection direction = PumpDirection::Clockwise;
  std::vector<EnsembleDrive> drives;
  // two_mode_mixer
  double g = 0.0;
  // squeezer_mixer
  double beta_u = 0.0;
  double beta_s = 0.0;
  // transformed_step (needs the protocol block)
  int step = 0;
};

struct OracleConfig {
  int cutoff = 12;
  std::vector<double> times;
  double tolerance = 1e-3;
};

struct ModesConfig {
  long atoms = 0;
  double wavenumber = 0.0;
  double spacing = 0.0;
  double warn_threshold = 0.05;
};

struct SweepConfig {
  std::string command;  // protocol | steady-state | evolve
  std::string pointer;  // JSON pointer to the swept value
  std::vector<double> values;
  int workers = 0;  // 0 = hardware concurrency
};

struct RunConfig {
  double kappa = 1.0;
  std::optional<ProtocolSpec> protocol;
  std::optional<SystemConfig> system;
  std::optional<EvolveConfig> evolve;
  std::optional<OracleConfig> oracle;
  std::optional<ModesConfig> modes;
  std::optional<SweepConfig> sweep;
  Json raw;
};

namespace detail {

/// Accumulates violations while pulling typed values out of JSON objects.
class ConfigReader {
 public:
  explicit ConfigReader(std::vector<std::string>& violations)
      : violations_(violations) {}

  void fail(const std::string& path, const std::string& message) {
    violations_.push_back(path + ": " + message);
  }

  void check_keys(const Json& obj, const std::string& path,
                  std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
      bool known = false;
      for (const char* key : allowed) {
        if (item.key() == key) {
          known = true;
          break;
        }
      }
      if (!known) fail(path, "unknown key \"" + item.key() + "\"");
    }
  }

  bool has(const Json& obj, const char* key) const {
    return obj.contains(key);
  }

  double number(const Json& obj, const std::string& path, const char* key,
                double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) {
      fail(path + "/" + key, "must be a number");
      return fallback;
    }
    return obj[key].get<double>();
  }

  double required_number(const Json& obj, const std::string& path,
                         const char* key) {
    if (!obj.contains(key)) {
      fail(path, "missing required key \"" + std::string(key) + "\"");
      return 0.0;
    }
    return number(obj, path, key, 0.0);
  }

  long integer(const Json& obj, const std::string& path, const char* key,
               long fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) {
      fail(path + "/" + key, "must be an integer");
      return fallback;
    }
    return obj[key].get<long>();
  }

  std::string text(const Json& obj, const std::string& path, const char* key,
                   const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_string()) {
      fail(path + "/" + key, "must be a string");
      return fallback;
    }
    return obj[key].get<std::string>();
  }

  const Json* object(const Json& obj, const std::string& path,
                     const char* key) {
    if (!obj.contains(key)) return nullptr;
    if (!obj[key].is_object()) {
      fail(path + "/" + key, "must be an object");
      return nullptr;
    }
    return &obj[key];
  }

 private:
  std::vector<std::string>& violations_;
};

inline void parse_protocol(ConfigReader& r, const Json& obj, double kappa,
                           RunConfig& out) {
  const std::string path = "/protocol";
  r.check_keys(obj, path,
               {"kind", "xi", "beta_ref", "step_duration", "samples_per_step",
                "stability_margin", "fidelity_threshold"});
  ProtocolSpec spec;
  const std::string kind = r.text(obj, path, "kind", "");
  if (kind == "one_two_mode") {
    spec.kind = ProtocolKind::OneTwoMode;
  } else if (kind == "four_mode") {
    spec.kind = ProtocolKind::FourMode;
  } else {
    r.fail(path + "/kind", "must be \"one_two_mode\" or \"four_mode\"");
  }
  spec.kappa = kappa;
  spec.xi = r.required_number(obj, path, "xi");
  spec.beta_ref = r.number(obj, path, "beta_ref", 2.0 * kappa);
  spec.step_duration = r.number(obj, path, "step_duration", 10.0 / kappa);
  spec.samples_per_step =
      static_cast<int>(r.integer(obj, path, "samples_per_step", 0));
  spec.stability_margin = r.number(obj, path, "stability_margin", 0.95);
  spec.fidelity_threshold = r.number(obj, path, "fidelity_threshold", 0.99);

  if (!(spec.xi > 0.0)) r.fail(path + "/xi", "must be positive");
  if (!(spec.beta_ref > 0.0)) r.fail(path + "/beta_ref", "must be positive");
  if (!(spec.step_duration > 0.0)) {
    r.fail(path + "/step_duration", "must be positive");
  }
  if (spec.samples_per_step < 0) {
    r.fail(path + "/samples_per_step", "must be >= 0");
  }
  if (!(spec.stability_margin > 0.0 && spec.stability_margin < 1.0)) {
    r.fail(path + "/stability_margin", "must lie in (0, 1)");
  }
  if (!(spec.fidelity_threshold > 0.0 && spec.fidelity_threshold <= 1.0)) {
    r.fail(path + "/fidelity_threshold", "must lie in (0, 1]");
  }
  out.protocol = spec;
}

inline void parse_system(ConfigReader& r, const Json& obj, RunConfig& out) {
  const std::string path = "/system";
  SystemConfig system;
  system.type = r.text(obj, path, "type", "");
  if (system.type == "laser") {
    r.check_keys(obj, path, {"type", "direction", "drives"});
    const std::string dir = r.text(obj, path, "direction", "clockwise");
    if (dir == "clockwise") {
      system.direction = PumpDirection::Clockwise;
    } else if (dir == "anticlockwise") {
      system.direction = PumpDirection::Anticlockwise;
    } else {
      r.fail(path + "/direction",
             "must be \"clockwise\" or \"anticlockwise\"");
    }
    if (!obj.contains("drives") || !obj["drives"].is_array() ||
        obj["drives"].empty() || obj["drives"].size() > 2) {
      r.fail(path + "/drives", "must be an array of 1 or 2 drive objects");
    } else {
      int index = 0;
      for (const auto& item : obj["drives"]) {
        const std::string drive_path =
            path + "/drives/" + std::to_string(index++);
        if (!item.is_object()) {
          r.fail(drive_path, "must be an object");
          continue;
        }
        r.check_keys(item, drive_path, {"beta_u", "beta_s", "phi_u", "phi_s"});
        EnsembleDrive drive;
        drive.beta_u = r.required_number(item, drive_path, "beta_u");
        drive.beta_s = r.required_number(item, drive_path, "beta_s");
        drive.phi_u = r.number(item, drive_path, "phi_u", 0.0);
        drive.phi_s = r.number(item, drive_path, "phi_s", 0.0);
        system.drives.push_back(drive);
      }
    }
  } else if (system.type == "two_mode_mixer") {
    r.check_keys(obj, path, {"type", "g"});
    system.g = r.required_number(obj, path, "g");
  } else if (system.type == "squeezer_mixer") {
    r.check_keys(obj, path, {"type", "beta_u", "beta_s"});
    system.beta_u = r.required_number(obj, path, "beta_u");
    system.beta_s = r.required_number(obj, path, "beta_s");
  } else if (system.type == "transformed_step") {
    r.check_keys(obj, path, {"type", "step"});
    system.step = static_cast<int>(r.integer(obj, path, "step", 0));
    if (system.step < 0) r.fail(path + "/step", "must be >= 0");
  } else {
    r.fail(path + "/type",
           "must be one of laser, two_mode_mixer, squeezer_mixer, "
           "transformed_step");
  }
  out.system = system;
}

inline void parse_evolve(ConfigReader& r, const Json& obj, RunConfig& out) {
  const std::string path = "/evolve";
  r.check_keys(obj, path, {"time", "samples", "initial"});
  EvolveConfig evolve;
  evolve.time = r.required_number(obj, path, "time");
  if (!(evolve.time >= 0.0)) r.fail(path + "/time", "must be >= 0");
  evolve.samples = static_cast<int>(r.integer(obj, path, "samples", 0));
  if (evolve.samples < 0) r.fail(path + "/samples", "must be >= 0");
  if (const Json* init = r.object(obj, path, "initial")) {
    const std::string init_path = path + "/initial";
    r.check_keys(*init, init_path, {"type", "occupation", "xi", "mode"});
    evolve.initial.type = r.text(*init, init_path, "type", "vacuum");
    if (evolve.initial.type == "vacuum") {
      // nothing more
    } else if (evolve.initial.type == "thermal") {
      evolve.initial.occupation =
          r.required_number(*init, init_path, "occupation");
      if (!(evolve.initial.occupation >= 0.0)) {
        r.fail(init_path + "/occupation", "must be >= 0");
      }
    } else if (evolve.initial.type == "squeezed") {
      evolve.initial.xi = r.required_number(*init, init_path, "xi");
      evolve.initial.mode = r.text(*init, init_path, "mode", "");
      if (!try_parse_mode_label(evolve.initial.mode)) {
        r.fail(init_path + "/mode", "unrecognized mode label \"" +
                                        evolve.initial.mode + "\"");
      }
    } else {
      r.fail(init_path + "/type",
             "must be one of vacuum, thermal, squeezed");
    }
  }
  out.evolve = evolve;
}

inline void parse_oracle(ConfigReader& r, const Json& obj, RunConfig& out) {
  const std::string path = "/oracle";
  r.check_keys(obj, path, {"cutoff", "times", "tolerance"});
  OracleConfig oracle;
  oracle.cutoff = static_cast<int>(r.integer(obj, path, "cutoff", 12));
  if (oracle.cutoff < 2 || oracle.cutoff > 30) {
    r.fail(path + "/cutoff", "must lie in [2, 30]");
  }
  oracle.tolerance = r.number(obj, path, "tolerance", 1e-3);
  if (!(oracle.tolerance > 0.0)) r.fail(path + "/tolerance", "must be positive");
  if (!obj.contains("times") || !obj["times"].is_array() ||
      obj["times"].empty()) {
    r.fail(path + "/times", "must be a nonempty array of times");
  } else {
    int index = 0;
    for (const auto& item : obj["times"]) {
      if (!item.is_number() || !(item.get<double>() > 0.0)) {
        r.fail(path + "/times/" + std::to_string(index),
               "must be a positive number");
      } else {
        oracle.times.push_back(item.get<double>());
      }
      ++index;
    }
    std::sort(oracle.times.begin(), oracle.times.end());
  }
  out.oracle = oracle;
}

inline void parse_modes(ConfigReader& r, const Json& obj, RunConfig& out) {
  const std::string path = "/modes";
  r.check_keys(obj, path, {"atoms", "wavenumber", "spacing", "warn_threshold"});
  ModesConfig modes;
  modes.atoms = r.integer(obj, path, "atoms", 0);
  if (modes.atoms < 1) r.fail(path + "/atoms", "must be a positive integer");
  modes.wavenumber = r.required_number(obj, path, "wavenumber");
  if (!(modes.wavenumber > 0.0)) r.fail(path + "/wavenumber", "must be positive");
  modes.spacing = r.required_number(obj, path, "spacing");
  if (!(modes.spacing > 0.0)) r.fail(path + "/spacing", "must be positive");
  modes.warn_threshold = r.number(obj, path, "warn_threshold", 0.05);
  if (!(modes.warn_threshold > 0.0 && modes.warn_threshold < 1.0)) {
    r.fail(path + "/warn_threshold", "must lie in (0, 1)");
  }
  out.modes = modes;
}

inline void parse_sweep(ConfigReader& r, const Json& obj, RunConfig& out) {
  const std::string path = "/sweep";
  r.check_keys(obj, path, {"command", "pointer", "values", "workers"});
  SweepConfig sweep;
  sweep.command = r.text(obj, path, "command", "");
  if (sweep.command != "protocol" && sweep.command != "steady-state" &&
      sweep.command != "evolve") {
    r.fail(path + "/command",
           "must be one of protocol, steady-state, evolve");
  }
  sweep.pointer = r.text(obj, path, "pointer", "");
  if (sweep.pointer.empty() || sweep.pointer.front() != '/') {
    r.fail(path + "/pointer", "must be a JSON pointer starting with '/'");
  }
  if (!obj.contains("values") || !obj["values"].is_array() ||
      obj["values"].empty()) {
    r.fail(path + "/values", "must be a nonempty array of numbers");
  } else {
    int index = 0;
    for (const auto& item : obj["values"]) {
      if (!item.is_number()) {
        r.fail(path + "/values/" + std::to_string(index), "must be a number");
      } else {
        sweep.values.push_back(item.get<double>());
      }
      ++index;
    }
  }
  sweep.workers = static_cast<int>(r.integer(obj, path, "workers", 0));
  if (sweep.workers < 0) r.fail(path + "/workers", "must be >= 0");
  out.sweep = sweep;
}

}  // namespace detail

/// Parse and validate a configuration document. Throws ConfigError listing
/// every violation.
inline RunConfig parse_config(const Json& document) {
  std::vector<std::string> violations;
  detail::ConfigReader reader(violations);
  RunConfig out;
  out.raw = document;

  if (!document.is_object()) {
    throw ConfigError("top level must be a JSON object");
  }
  reader.check_keys(
      document, "",
      {"kappa", "protocol", "system", "evolve", "oracle", "modes", "sweep"});

  out.kappa = reader.number(document, "", "kappa", 1.0);
  if (!(out.kappa > 0.0)) reader.fail("/kappa", "must be positive");

  if (const Json* obj = reader.object(document, "", "protocol")) {
    detail::parse_protocol(reader, *obj, out.kappa, out);
  }
  if (const Json* obj = reader.object(document, "", "system")) {
    detail::parse_system(reader, *obj, out);
  }
  if (const Json* obj = reader.object(document, "", "evolve")) {
    detail::parse_evolve(reader, *obj, out);
  }
  if (const Json* obj = reader.object(document, "", "oracle")) {
    detail::parse_oracle(reader, *obj, out);
  }
  if (const Json* obj = reader.object(document, "", "modes")) {
    detail::parse_modes(reader, *obj, out);
  }
  if (const Json* obj = reader.object(document, "", "sweep")) {
    detail::parse_sweep(reader, *obj, out);
  }

  if (out.system && out.system->type == "transformed_step" && !out.protocol) {
    reader.fail("/system", "transformed_step requires a protocol block");
  }
  if (out.system && out.system->type == "transformed_step" && out.protocol) {
    if (out.system->step >= out.protocol->n_steps()) {
      reader.fail("/system/step",
                  "out of range for " + to_string(out.protocol->kind));
    }
  }

  if (!violations.empty()) throw ConfigError(std::move(violations));
  return out;
}

/// Load a configuration file. I/O and JSON syntax problems are reported as
/// ConfigError too.
inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  Json document;
  try {
    document = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("JSON syntax error: ") + e.what());
  }
  return parse_config(document);
}

}  // namespace ringcv
